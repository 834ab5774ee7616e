"""Polyhedral cones in exact rational arithmetic.

A cone is held in both representations at once: generator rays (V-form) and
facet normals (H-form, C = {z : n.z >= 0 for every normal n}). The facet
normal set is exactly a generator set of the dual cone, so dualizing is a
swap of the two lists. Conversion between the forms is a brute-force
extreme-ray enumeration over active-constraint subsets, which is adequate at
desk scale (d <= 6) and keeps every sign test exact.

Membership is closed (>= 0) everywhere; strict comparisons require a
full-dimensional cone and use strict (> 0) facet tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import nullspace_basis, rank, row_space_basis
from .rationals import (
    Vec,
    IntVec,
    as_fraction,
    as_vector,
    dot,
    is_zero,
    normalize_direction,
    sub,
)


class GeometryError(ValueError):
    """Invalid geometric input (dimension mismatch, malformed cone config)."""


class ImproperConeError(GeometryError):
    """Cone is {0} or all of R^d and cannot be used for ranking."""


class NotPointedError(GeometryError):
    """Operation requires a pointed cone (C ∩ −C = {0})."""


class NoInteriorError(GeometryError):
    """Strict comparison requested on a cone without interior."""


def _canonical_rays(rays: Iterable[Sequence]) -> tuple[IntVec, ...]:
    seen: dict[IntVec, None] = {}
    for r in rays:
        fr = [as_fraction(c) for c in r]
        if is_zero(fr):
            continue
        seen[normalize_direction(fr)] = None
    return tuple(sorted(seen))


def dual_generators(rays: Sequence[Sequence], dim: int) -> tuple[IntVec, ...]:
    """Generators of {v : r.v >= 0 for every r in rays}.

    Returns lineality basis vectors in ± pairs plus the extreme rays of the
    pointed part, all as canonical coprime-integer directions.
    """
    rays = [tuple(as_fraction(c) for c in r) for r in rays]
    for r in rays:
        if len(r) != dim:
            raise GeometryError(f"ray of dimension {len(r)}, expected {dim}")
    rays = [r for r in rays if not is_zero(r)]
    if not rays:
        # dual of {0} is everything
        basis = nullspace_basis([], dim)
        return _canonical_rays(list(basis) + [tuple(-c for c in b) for b in basis])

    gens: list[IntVec] = []
    lin = nullspace_basis(rays)
    for b in lin:
        gens.append(b)
        gens.append(tuple(-c for c in b))

    # pointed part lives in span(rays); express constraints in that basis
    span = row_space_basis(rays)
    k = len(span)
    if k == 0:
        return _canonical_rays(gens)
    proj = [tuple(dot(b, r) for b in span) for r in rays]  # rows: constraints in R^k

    def lift(u: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(sum(u[i] * span[i][j] for i in range(k)) for j in range(dim))

    if k == 1:
        signs = {1 if dot(p, (1,)) > 0 else -1 for p in proj if dot(p, (1,)) != 0}
        if len(signs) == 1:
            s = signs.pop()
            gens.append(normalize_direction(lift((Fraction(s),))))
        return _canonical_rays(gens)

    for subset in itertools.combinations(range(len(proj)), k - 1):
        sub_rows = [proj[i] for i in subset]
        if rank(sub_rows) != k - 1:
            continue
        for v in nullspace_basis(sub_rows):
            prods = [dot(p, v) for p in proj]
            if all(p >= 0 for p in prods):
                gens.append(normalize_direction(lift(v)))
            elif all(p <= 0 for p in prods):
                gens.append(normalize_direction(lift(tuple(-c for c in v))))
    return _canonical_rays(gens)


@dataclass(frozen=True)
class PolyhedralCone:
    """Polyhedral cone with both generator rays and facet normals.

    The facet_normals tuple generates the dual cone; it may contain more
    vectors than the true facet count (lineality directions come in ± pairs)
    but always describes the same set.
    """

    dim: int
    rays: tuple[IntVec, ...]
    facet_normals: tuple[IntVec, ...]
    pointed: bool = field(init=False)
    full_dimensional: bool = field(init=False)

    def __post_init__(self):
        if self.dim < 2:
            raise GeometryError("cones live in dimension d >= 2")
        for r in self.rays:
            for n in self.facet_normals:
                if dot(n, r) < 0:
                    raise GeometryError(
                        f"ray {r} violates facet inequality {n} (inconsistent representations)"
                    )
        # C pointed iff C+ full-dimensional, and vice versa
        object.__setattr__(self, "pointed", rank(self.facet_normals) == self.dim if self.facet_normals else False)
        object.__setattr__(self, "full_dimensional", rank(self.rays) == self.dim if self.rays else False)

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_rays(cls, rays: Sequence[Sequence], dim: int | None = None) -> "PolyhedralCone":
        rays = list(rays)
        if dim is None:
            if not rays:
                raise GeometryError("dimension required for a cone with no rays")
            dim = len(rays[0])
        canon = _canonical_rays(rays)
        return cls(dim=dim, rays=canon, facet_normals=dual_generators(canon, dim))

    @classmethod
    def from_dual_rays(cls, dual_rays: Sequence[Sequence], dim: int | None = None) -> "PolyhedralCone":
        """Cone whose dual is generated by the given rays (C = (cone W)+)."""
        dual_rays = list(dual_rays)
        if dim is None:
            if not dual_rays:
                raise GeometryError("dimension required")
            dim = len(dual_rays[0])
        normals = _canonical_rays(dual_rays)
        return cls(dim=dim, rays=dual_generators(normals, dim), facet_normals=normals)

    @classmethod
    def orthant(cls, dim: int) -> "PolyhedralCone":
        e = tuple(tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim))
        return cls(dim=dim, rays=e, facet_normals=e)

    @classmethod
    def halfspace(cls, w: Sequence) -> "PolyhedralCone":
        """H+(w) = {z : w.z >= 0}."""
        fw = as_vector(w)
        if is_zero(fw):
            raise GeometryError("halfspace needs a nonzero normal")
        n = normalize_direction(fw)
        return cls.from_dual_rays([n], dim=len(n))

    def dual(self) -> "PolyhedralCone":
        return PolyhedralCone(dim=self.dim, rays=self.facet_normals, facet_normals=self.rays)

    def negate(self) -> "PolyhedralCone":
        return PolyhedralCone(
            dim=self.dim,
            rays=tuple(sorted(tuple(-c for c in r) for r in self.rays)),
            facet_normals=tuple(sorted(tuple(-c for c in n) for n in self.facet_normals)),
        )

    # -- predicates -------------------------------------------------------

    @property
    def proper(self) -> bool:
        return bool(self.rays) and bool(self.facet_normals)

    def contains(self, v: Sequence) -> bool:
        fv = [as_fraction(c) for c in v]
        if len(fv) != self.dim:
            raise GeometryError(f"point of dimension {len(fv)}, cone has {self.dim}")
        return all(dot(n, fv) >= 0 for n in self.facet_normals)

    def strictly_contains(self, v: Sequence) -> bool:
        """Interior membership; requires a full-dimensional cone."""
        if not self.full_dimensional:
            raise NoInteriorError("cone has empty interior; strict test undefined")
        fv = [as_fraction(c) for c in v]
        if len(fv) != self.dim:
            raise GeometryError(f"point of dimension {len(fv)}, cone has {self.dim}")
        return all(dot(n, fv) > 0 for n in self.facet_normals)

    @property
    def is_halfspace(self) -> bool:
        return len(self.facet_normals) == 1

    def require_ranking_usable(self) -> None:
        """Ranking needs a proper cone that is pointed or a halfspace.

        For a halfspace the dual is a single ray and the minimum degenerates
        to one weighted count; all other non-pointed cones are rejected (they
        allow mutual domination of distinct points).
        """
        if not self.proper:
            raise ImproperConeError("cone is {0} or R^d; ranking is degenerate")
        if not self.pointed and not self.is_halfspace:
            raise NotPointedError(
                "ranking requires a pointed cone (or a halfspace)"
            )

    def same_cone(self, other: "PolyhedralCone") -> bool:
        """Set equality via mutual ray membership (generated sets coincide)."""
        if self.dim != other.dim:
            return False
        return all(other.contains(r) for r in self.rays) and all(
            self.contains(r) for r in other.rays
        )


def dual_cone(cone: PolyhedralCone) -> PolyhedralCone:
    """{v : v.z >= 0 for every z in the cone}; swaps rays and facet normals."""
    return cone.dual()


def leq_cone(cone: PolyhedralCone, y: Sequence, z: Sequence) -> bool:
    """y <=_C z  iff  z - y ∈ C (closed membership, exact signs)."""
    fy, fz = as_vector(y), as_vector(z)
    if len(fy) != len(fz) or len(fy) != cone.dim:
        raise GeometryError("dimension mismatch in cone comparison")
    return cone.contains(sub(fz, fy))


def lt_cone(cone: PolyhedralCone, y: Sequence, z: Sequence) -> bool:
    """y <_C z  iff  z - y ∈ int C; needs a full-dimensional cone."""
    fy, fz = as_vector(y), as_vector(z)
    if len(fy) != len(fz) or len(fy) != cone.dim:
        raise GeometryError("dimension mismatch in cone comparison")
    return cone.strictly_contains(sub(fz, fy))


@dataclass(frozen=True)
class WeightBounds:
    """Componentwise bounds on simplex weight vectors.

    W = {w : sum w_i = 1, w >= 0, mins <= w <= maxs}; feasible iff
    mins <= maxs and sum(mins) <= 1 <= sum(maxs).
    """

    mins: Vec
    maxs: Vec

    def __post_init__(self):
        object.__setattr__(self, "mins", as_vector(self.mins))
        object.__setattr__(self, "maxs", as_vector(self.maxs))
        if len(self.mins) != len(self.maxs):
            raise GeometryError("mins and maxs must have equal length")
        if len(self.mins) < 2:
            raise GeometryError("need at least two criteria")
        for lo, hi in zip(self.mins, self.maxs):
            if not (0 <= lo <= hi <= 1):
                raise ImproperConeError(
                    f"infeasible weight bounds: need 0 <= min <= max <= 1, got [{lo}, {hi}]"
                )
        if sum(self.mins) > 1 or sum(self.maxs) < 1:
            raise ImproperConeError("infeasible weight bounds: no simplex point fits them")

    @property
    def dim(self) -> int:
        return len(self.mins)


def weight_polytope_vertices(bounds: WeightBounds) -> list[Vec]:
    """Vertices of W by brute force over active-bound patterns.

    At a vertex of the box-intersected simplex at most one coordinate is
    strictly between its bounds, so it suffices to pin every subset of
    coordinates to min or max and solve for the remaining one.
    """
    d = bounds.dim
    verts: dict[Vec, None] = {}
    for pattern in itertools.product((0, 1), repeat=d):
        # all pinned
        w = tuple(bounds.maxs[i] if pattern[i] else bounds.mins[i] for i in range(d))
        if sum(w) == 1:
            verts[w] = None
    for free in range(d):
        others = [i for i in range(d) if i != free]
        for pattern in itertools.product((0, 1), repeat=d - 1):
            w = [Fraction(0)] * d
            for i, p in zip(others, pattern):
                w[i] = bounds.maxs[i] if p else bounds.mins[i]
            rest = 1 - sum(w[i] for i in others)
            if bounds.mins[free] <= rest <= bounds.maxs[free]:
                w[free] = rest
                verts[tuple(w)] = None
    return sorted(verts)


def cone_from_weight_bounds(bounds: WeightBounds) -> PolyhedralCone:
    """Primal cone whose dual is generated by the weight polytope W."""
    verts = weight_polytope_vertices(bounds)
    if not verts:
        raise GeometryError("infeasible weight bounds: empty weight polytope")
    return PolyhedralCone.from_dual_rays(verts)


def cone_from_config(config: dict, dim: int | None = None) -> PolyhedralCone:
    """Build a cone from the JSON config form.

    Exactly one of the keys "rays", "dual_rays", "weight_bounds" is required.
    """
    if not isinstance(config, dict):
        raise GeometryError("cone config must be a JSON object")
    keys = [k for k in ("rays", "dual_rays", "weight_bounds") if k in config]
    if len(keys) != 1:
        raise GeometryError(
            'cone config needs exactly one of "rays", "dual_rays", "weight_bounds"'
        )
    key = keys[0]
    if key == "rays":
        return PolyhedralCone.from_rays([as_vector(r) for r in config["rays"]], dim=dim)
    if key == "dual_rays":
        return PolyhedralCone.from_dual_rays([as_vector(r) for r in config["dual_rays"]], dim=dim)
    wb = config["weight_bounds"]
    if not isinstance(wb, dict) or "min" not in wb or "max" not in wb:
        raise GeometryError('weight_bounds config needs "min" and "max" arrays')
    return cone_from_weight_bounds(WeightBounds(as_vector(wb["min"]), as_vector(wb["max"])))
