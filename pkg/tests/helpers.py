"""Shared randomized-instance generators (integer coordinates so float dot
products in the oracle stay exact)."""

from __future__ import annotations

import random

from conerank.geometry import PolyhedralCone
from conerank.ranking import AlternativeSet


def random_pointed_cone(rng: random.Random, d: int, span: int = 5) -> PolyhedralCone:
    """Random proper pointed full-dimensional cone from integer rays."""
    while True:
        rays = [
            tuple(rng.randint(-span, span) for _ in range(d))
            for _ in range(rng.randint(d, d + 2))
        ]
        rays = [r for r in rays if any(r)]
        if not rays:
            continue
        cone = PolyhedralCone.from_rays(rays, dim=d)
        if cone.proper and cone.pointed and cone.full_dimensional:
            return cone


def random_instance(
    rng: random.Random, d: int, n_max: int, coord_span: int = 30, n_min: int = 2
) -> AlternativeSet:
    n = rng.randint(n_min, n_max)
    return AlternativeSet.from_vectors(
        [tuple(rng.randint(-coord_span, coord_span) for _ in range(d)) for _ in range(n)]
    )


def random_cone_mix(rng: random.Random, d: int) -> PolyhedralCone:
    """Half orthants, half random pointed cones."""
    if rng.random() < 0.5:
        return PolyhedralCone.orthant(d)
    return random_pointed_cone(rng, d)


def separable_cohort(rng: random.Random, n: int = 14):
    """Two labeled clusters split along a direction near the first quadrant
    with margin larger than the perpendicular spread, so every cross-class
    difference stays within 45 degrees of the split direction and a rotated
    orthant can order the classes perfectly."""
    import math

    from conerank.classify import ACCEPTABLE, UNACCEPTABLE, LabeledSet

    theta = rng.uniform(-0.5, 1.0)
    u = (math.cos(theta), math.sin(theta))
    margin = 40.0
    spread = 12.0
    rows = []
    labels = {}
    for k in range(n):
        side = 1 if k % 2 == 0 else -1
        along = side * (margin / 2 + rng.uniform(0, spread))
        perp = rng.uniform(-spread, spread)
        x = along * u[0] - perp * u[1]
        y = along * u[1] + perp * u[0]
        pid = f"p{k}"
        rows.append((pid, (str(round(x, 2)), str(round(y, 2)))))
        labels[pid] = ACCEPTABLE if side > 0 else UNACCEPTABLE
    return LabeledSet(AlternativeSet.from_rows(rows), labels)
