"""Reference rankings for comparison: TOPSIS and the pure weighted sum.

TOPSIS here is the common textbook variant: vector normalization per
criterion, weighting, Euclidean distances to the ideal and anti-ideal, and
closeness = d_minus / (d_plus + d_minus). Identical points (both distances
zero) get closeness 0.5 by convention.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .rationals import as_fraction, as_vector, dot, is_zero
from .ranking import AlternativeSet, RankingInputError

BENEFIT = "benefit"
COST = "cost"


@dataclass(frozen=True)
class TopsisConfig:
    weights: tuple[Fraction, ...]
    criteria_sense: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", as_vector(self.weights))
        if any(w < 0 for w in self.weights) or sum(self.weights) != 1:
            raise RankingInputError("weights must be nonnegative and sum to 1")
        if len(self.criteria_sense) != len(self.weights):
            raise RankingInputError("one sense per criterion required")
        for s in self.criteria_sense:
            if s not in (BENEFIT, COST):
                raise RankingInputError(f"criterion sense must be benefit or cost, got {s!r}")

    @classmethod
    def equal_weights(cls, d: int, senses: Sequence[str] | None = None) -> "TopsisConfig":
        return cls(
            weights=tuple(Fraction(1, d) for _ in range(d)),
            criteria_sense=tuple(senses) if senses else (BENEFIT,) * d,
        )


def topsis_rank(X: AlternativeSet, cfg: TopsisConfig) -> dict[str, float]:
    """Closeness coefficient per alternative, higher is better."""
    if len(cfg.weights) != X.dim:
        raise RankingInputError("TOPSIS config dimension mismatch")
    mat = np.array([[float(c) for c in p.coords] for p in X.points])
    norms = np.sqrt((mat**2).sum(axis=0))
    if (norms == 0).any():
        j = int(np.argmin(norms))
        raise RankingInputError(f"criterion {j} is identically zero; TOPSIS normalization undefined")
    weighted = mat / norms * np.array([float(w) for w in cfg.weights])
    ideal = np.empty(X.dim)
    anti = np.empty(X.dim)
    for j, sense in enumerate(cfg.criteria_sense):
        col = weighted[:, j]
        ideal[j] = col.max() if sense == BENEFIT else col.min()
        anti[j] = col.min() if sense == BENEFIT else col.max()
    d_plus = np.sqrt(((weighted - ideal) ** 2).sum(axis=1))
    d_minus = np.sqrt(((weighted - anti) ** 2).sum(axis=1))
    out = {}
    for p, dp, dm in zip(X.points, d_plus, d_minus):
        total = dp + dm
        out[p.id] = 0.5 if total == 0 else float(dm / total)
    return out


def weighted_sum_rank(X: AlternativeSet, w: Sequence) -> dict[str, Fraction]:
    """Raw weighted sums w.x per alternative (exact)."""
    fw = as_vector(w)
    if len(fw) != X.dim:
        raise RankingInputError("weight vector dimension mismatch")
    if is_zero(fw):
        raise RankingInputError("zero weight vector")
    return {p.id: dot(fw, p.coords) for p in X.points}


def make_student_cohort(n: int = 40, seed: int = 0) -> AlternativeSet:
    """Synthetic cohort over (average grade, credit points), a stand-in for
    the unpublished study data: two positively related criteria on a 0.1
    grid with a few off-trend individuals."""
    rng = random.Random(seed)
    rows = []
    for k in range(n):
        ability = rng.uniform(0.0, 1.0)
        grade = round(60 + 35 * ability + rng.uniform(-8, 8), 1)
        credits = round(40 + 120 * ability + rng.uniform(-30, 30), 1)
        if k % 11 == 0:  # off-trend: strong grades, few credits (or reverse)
            credits = round(40 + 120 * (1 - ability) + rng.uniform(-15, 15), 1)
        rows.append(
            (
                f"s{k + 1:02d}",
                (as_fraction(str(max(50.0, min(100.0, grade)))),
                 as_fraction(str(max(0.0, min(180.0, credits))))),
            )
        )
    return AlternativeSet.from_rows(rows)
