"""Maximality, rank-reversal detection, peeling, and outlier flags.

A rank reversal is a pair x, y whose strict rank order flips after new
alternatives join the set; comparable pairs can never reverse, and a single
addition moves every rank by at most one. The peel procedure removes the
best-ranked alternatives together with everything they dominate and re-ranks
the remainder, exposing "rare" alternatives hidden behind dominance mass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil
from typing import Sequence

from .geometry import NotPointedError, PolyhedralCone, leq_cone
from .rationals import Vec, as_vector
from .ranking import AlternativeSet, LabeledPoint, RankingInputError, rank_all


def _strictly_below(cone: PolyhedralCone, a: Vec, b: Vec) -> bool:
    """a below b and not conversely (duplicate-vector safe)."""
    return leq_cone(cone, a, b) and not leq_cone(cone, b, a)


def pareto_maximal(X: AlternativeSet, cone: PolyhedralCone) -> tuple[str, ...]:
    """Ids of alternatives with no strictly greater alternative in X."""
    if not cone.pointed:
        raise NotPointedError("maximality needs a pointed cone")
    out = []
    for p in X.points:
        if not any(
            _strictly_below(cone, p.coords, q.coords)
            for q in X.points
            if q.id != p.id
        ):
            out.append(p.id)
    return tuple(out)


@dataclass(frozen=True)
class MaximalityReport:
    maximal_ids: tuple[str, ...]
    max_rank_ids: tuple[str, ...]
    max_rank: int
    max_rank_all_maximal: bool
    converse_witnesses: tuple[str, ...]  # maximal but below the max rank
    ranks: dict[str, int] = field(default_factory=dict)


def check_max_rank_maximality(X: AlternativeSet, cone: PolyhedralCone) -> MaximalityReport:
    """Max-rank alternatives are always maximal; the converse fails whenever
    some maximal alternative ranks strictly lower (witnesses reported)."""
    ranks = {i: r.value for i, r in rank_all(X, cone).items()}
    top = max(ranks.values())
    max_rank_ids = tuple(i for i in X.ids if ranks[i] == top)
    maximal = pareto_maximal(X, cone)
    witnesses = tuple(i for i in maximal if ranks[i] < top)
    return MaximalityReport(
        maximal_ids=maximal,
        max_rank_ids=max_rank_ids,
        max_rank=top,
        max_rank_all_maximal=set(max_rank_ids) <= set(maximal),
        converse_witnesses=witnesses,
        ranks=ranks,
    )


@dataclass(frozen=True)
class ReversalPair:
    x_id: str
    y_id: str
    kind: str  # "strict" | "weak"
    ranks_before: tuple[int, int]  # (r_X(x), r_X(y))
    ranks_after: tuple[int, int]  # (r_Z(x), r_Z(y))


@dataclass(frozen=True)
class ReversalReport:
    pairs: tuple[ReversalPair, ...]
    ranks_before: dict[str, int]
    ranks_after: dict[str, int]
    addition_ids: tuple[str, ...]


def extend_set(
    X: AlternativeSet, additions: Sequence, prefix: str = "add"
) -> tuple[AlternativeSet, tuple[str, ...]]:
    """X with extra points appended under generated ids."""
    new_points = list(X.points)
    new_ids = []
    for k, a in enumerate(additions, 1):
        pid = f"{prefix}{k}"
        while pid in X:
            pid = "_" + pid
        new_points.append(LabeledPoint(pid, as_vector(a)))
        new_ids.append(pid)
    return AlternativeSet(tuple(new_points)), tuple(new_ids)


def reversal_pairs(
    before: dict[str, int], after: dict[str, int], ids: Sequence[str]
) -> tuple[ReversalPair, ...]:
    """Strict and weak reversal pairs among `ids`. Weak means exactly one of
    the two strict inequalities relaxes to equality; pairs tied both before
    and after are not reported."""
    pairs = []
    for x in ids:
        for y in ids:
            if x == y:
                continue
            b_lt = before[x] < before[y]
            b_eq = before[x] == before[y]
            a_lt = after[y] < after[x]
            a_eq = after[y] == after[x]
            if b_lt and a_lt:
                kind = "strict"
            elif (b_eq and a_lt) or (b_lt and a_eq):
                kind = "weak"
            else:
                continue
            pairs.append(
                ReversalPair(x, y, kind, (before[x], before[y]), (after[x], after[y]))
            )
    pairs.sort(key=lambda p: (p.kind != "strict", p.x_id, p.y_id))
    return tuple(pairs)


def detect_reversals(
    X: AlternativeSet, additions: Sequence, cone: PolyhedralCone
) -> ReversalReport:
    """All strict and weak reversal pairs among members of X caused by the
    additions."""
    if not additions:
        raise RankingInputError("need at least one added alternative")
    Z, new_ids = extend_set(X, additions)
    before = {i: r.value for i, r in rank_all(X, cone).items()}
    after_all = {i: r.value for i, r in rank_all(Z, cone).items()}
    after = {i: after_all[i] for i in X.ids}

    if len(new_ids) == 1:
        for i in X.ids:
            delta = after[i] - before[i]
            if delta not in (0, 1):
                raise AssertionError(
                    f"single addition moved rank of {i} by {delta}; evaluator bug"
                )

    return ReversalReport(
        pairs=reversal_pairs(before, after, X.ids),
        ranks_before=before,
        ranks_after=after_all,
        addition_ids=new_ids,
    )


@dataclass(frozen=True)
class PeelLayer:
    best_ids: tuple[str, ...]
    removed_ids: tuple[str, ...]  # best plus everything they dominate
    ranks: dict[str, int]


def peel_ranking(X: AlternativeSet, cone: PolyhedralCone) -> list[PeelLayer]:
    """Iteratively rank, take the max-rank alternatives (all ties), drop them
    and everything they dominate, and re-rank the remainder."""
    if not cone.pointed:
        raise NotPointedError("peeling needs a pointed cone")
    layers: list[PeelLayer] = []
    current = list(X.points)
    while current:
        if len(current) == 1:
            p = current[0]
            layers.append(PeelLayer((p.id,), (p.id,), {p.id: 1}))
            break
        sub = AlternativeSet(tuple(current))
        ranks = {i: r.value for i, r in rank_all(sub, cone).items()}
        top = max(ranks.values())
        best = [p for p in current if ranks[p.id] == top]
        removed = {
            q.id
            for q in current
            if any(leq_cone(cone, q.coords, b.coords) for b in best)
        }
        layers.append(
            PeelLayer(tuple(p.id for p in best), tuple(sorted(removed)), ranks)
        )
        current = [p for p in current if p.id not in removed]
    return layers


def flag_outliers(X: AlternativeSet, cone: PolyhedralCone, gap: int | None = None) -> tuple[str, ...]:
    """Alternatives nobody dominates whose rank trails the best by >= gap.

    Low rank without being dominated marks an alternative that is merely
    hard to compare, not worse; gap defaults to ceil(N/4).
    """
    if gap is None:
        gap = ceil(X.size / 4)
    if gap < 1:
        raise RankingInputError("gap must be at least 1")
    ranks = {i: r.value for i, r in rank_all(X, cone).items()}
    top = max(ranks.values())
    out = []
    for p in X.points:
        if ranks[p.id] > top - gap:
            continue
        dominated = any(
            _strictly_below(cone, p.coords, q.coords)
            for q in X.points
            if q.id != p.id
        )
        if not dominated:
            out.append(p.id)
    return tuple(out)


def search_equal_dominance_gap(
    X_size: int,
    cone: PolyhedralCone,
    trials: int,
    seed: int = 0,
) -> dict | None:
    """Randomized hunt for two alternatives that dominate equally many others
    yet rank very differently. Best effort; returns None when nothing shows
    up within the trial budget."""
    import random

    rng = random.Random(seed)
    d = cone.dim
    best = None
    for _ in range(trials):
        X = AlternativeSet.from_vectors(
            [tuple(rng.randint(-20, 20) for _ in range(d)) for _ in range(X_size)]
        )
        ranks = {i: r.value for i, r in rank_all(X, cone).items()}
        dom = {
            p.id: sum(
                1
                for q in X.points
                if q.id != p.id and _strictly_below(cone, q.coords, p.coords)
            )
            for p in X.points
        }
        for a in X.ids:
            for b in X.ids:
                if a < b and dom[a] == dom[b]:
                    gap = abs(ranks[a] - ranks[b])
                    if best is None or gap > best["gap"]:
                        best = {
                            "gap": gap,
                            "pair": (a, b),
                            "ranks": (ranks[a], ranks[b]),
                            "dominates": dom[a],
                            "points": [(p.id, p.coords) for p in X.points],
                        }
    if best and best["gap"] >= 2:
        return best
    return None
