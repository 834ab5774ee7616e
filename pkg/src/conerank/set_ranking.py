"""Rankings of sets of alternatives.

Two unary indicators over subsets A: the set cone rank (max over a in A of
the exact cone rank of a) and the domination indicator (how many members of
X are dominated by at least one element of A). Both are monotone for the set
order "A dominates B iff every b in B is below some a in A"; the domination
indicator additionally refines it strictly, the set cone rank does not.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .geometry import PolyhedralCone, leq_cone
from .rationals import Vec, as_vector
from .ranking import AlternativeSet, RankingInputError, rank_cone, rank_w


@dataclass(frozen=True)
class Member:
    """Element of a set under comparison: an id from X or an external point."""

    label: str
    coords: Vec


@dataclass(frozen=True)
class SetRankResult:
    value: int
    attaining_label: str | None = None
    dominated_ids: tuple[str, ...] = ()


def resolve_subset(
    members_def: Sequence, X: AlternativeSet, prefix: str = "q"
) -> list[Member]:
    """Resolve a subset given as ids of X and/or explicit coordinate vectors.

    May be empty; external points get generated labels.
    """
    members: list[Member] = []
    ext = 0
    for item in members_def:
        if isinstance(item, str):
            if item not in X:
                raise RankingInputError(f"unknown alternative id {item!r}")
            members.append(Member(item, X.vector(item)))
        else:
            v = as_vector(item)
            if len(v) != X.dim:
                raise RankingInputError(
                    f"set member of dimension {len(v)}, expected {X.dim}"
                )
            ext += 1
            members.append(Member(f"{prefix}{ext}", v))
    return members


def set_dominates(
    A: Sequence, B: Sequence, X: AlternativeSet, cone: PolyhedralCone
) -> bool:
    """True iff every member of B is dominated by (below) some member of A.

    Empty B is dominated by anything; empty A dominates only empty B.
    """
    mem_a = resolve_subset(A, X, prefix="a")
    mem_b = resolve_subset(B, X, prefix="b")
    return all(
        any(leq_cone(cone, b.coords, a.coords) for a in mem_a) for b in mem_b
    )


def set_rank(
    A: Sequence, X: AlternativeSet, cone: PolyhedralCone
) -> SetRankResult:
    """Set cone rank: max over a in A of rank_cone(X, C, a); 0 for empty A."""
    members = resolve_subset(A, X)
    if not members:
        return SetRankResult(value=0)
    best_val = -1
    best_label = None
    for m in members:
        v = rank_cone(X, cone, m.coords).value
        if v > best_val or (v == best_val and m.label < best_label):
            best_val, best_label = v, m.label
    return SetRankResult(value=best_val, attaining_label=best_label)


def set_rank_w(
    A: Sequence, X: AlternativeSet, w: Sequence, cone: PolyhedralCone | None = None
) -> SetRankResult:
    """Set w-rank: max over a in A of rank_w(X, w, a); 0 for empty A."""
    members = resolve_subset(A, X)
    if not members:
        return SetRankResult(value=0)
    best_val = -1
    best_label = None
    for m in members:
        v = rank_w(X, w, m.coords)
        if v > best_val or (v == best_val and m.label < best_label):
            best_val, best_label = v, m.label
    return SetRankResult(value=best_val, attaining_label=best_label)


def indicator_cx(
    A: Sequence, X: AlternativeSet, cone: PolyhedralCone
) -> SetRankResult:
    """#{x in X : some a in A dominates x}, with the dominated ids as witnesses."""
    members = resolve_subset(A, X)
    dominated = tuple(
        sorted(
            p.id
            for p in X.points
            if any(leq_cone(cone, p.coords, m.coords) for m in members)
        )
    )
    return SetRankResult(value=len(dominated), dominated_ids=dominated)


@dataclass(frozen=True)
class RefinementReport:
    a_dominates_b: bool
    b_dominates_a: bool
    cx_a: int
    cx_b: int
    setrank_a: int
    setrank_b: int
    cx_strict: bool
    setrank_strict: bool


def refinement_check(
    A: Sequence, B: Sequence, X: AlternativeSet, cone: PolyhedralCone
) -> RefinementReport:
    """Compare the set order with both indicators on a pair of subsets.

    Demonstrates that the domination indicator strictly refines the set order
    while the set cone rank may produce equality (the recorded counterexample).
    """
    ab = set_dominates(A, B, X, cone)
    ba = set_dominates(B, A, X, cone)
    cx_a = indicator_cx(A, X, cone).value
    cx_b = indicator_cx(B, X, cone).value
    rn_a = set_rank(A, X, cone).value
    rn_b = set_rank(B, X, cone).value
    return RefinementReport(
        a_dominates_b=ab,
        b_dominates_a=ba,
        cx_a=cx_a,
        cx_b=cx_b,
        setrank_a=rn_a,
        setrank_b=rn_b,
        cx_strict=cx_a > cx_b,
        setrank_strict=rn_a > rn_b,
    )
