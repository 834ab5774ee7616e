"""Canonical demonstration datasets used by tests, CLI demos, and the
explorer UI end-to-end checks. Coordinates are exact decimal strings."""

from __future__ import annotations

from .geometry import PolyhedralCone
from .ranking import AlternativeSet

# Three mutually incomparable points whose middle sits inside the hull
# segment; adding the spread points below the middle lifts its rank to 4
# while the outer two stay at 1.
CONCAVE_FRONT_BASE = [
    ("A", ("0", "4")),
    ("B", ("1.5", "1.5")),
    ("C", ("4", "0")),
]
CONCAVE_FRONT_EXTRA = [
    ("y1", ("1.4", "0.3")),
    ("y2", ("1.0", "0.8")),
    ("y3", ("0.3", "1.4")),
]

# Reversal scenario: five added points below x flip the (x, y) order from
# (1, 2) to (6, 2).
REVERSAL_BASE = [
    ("x", ("1", "0")),
    ("y", ("0", "2")),
    ("p", ("-1", "1")),
]
REVERSAL_ADDITIONS = [
    ("0.8", "-0.1"),
    ("0.7", "-0.2"),
    ("0.6", "-0.3"),
    ("0.5", "-0.4"),
    ("0.4", "-0.5"),
]

# Set-ranking picture: ranks (1, 2, 1); dropping one point at a time gives
# set ranks (2, 1, 2) while the domination indicator sees (2, 2, 2).
SET_PICTURE = [
    ("x1", ("0", "4")),
    ("x2", ("2", "2")),
    ("x3", ("4", "0")),
]

TWO_POINT_CHAIN = [("a", ("0", "0")), ("b", ("1", "1"))]
TWO_POINT_ANTICHAIN = [("a", ("0", "1")), ("b", ("1", "0"))]


def concave_front(with_extra: bool) -> AlternativeSet:
    rows = CONCAVE_FRONT_BASE + (CONCAVE_FRONT_EXTRA if with_extra else [])
    return AlternativeSet.from_rows(rows)


def reversal_base() -> AlternativeSet:
    return AlternativeSet.from_rows(REVERSAL_BASE)


def set_picture() -> AlternativeSet:
    return AlternativeSet.from_rows(SET_PICTURE)


def chain(n: int = 2) -> AlternativeSet:
    return AlternativeSet.from_rows(
        [(chr(ord("a") + k), (str(k), str(k))) for k in range(n)]
    )


def orthant2() -> PolyhedralCone:
    return PolyhedralCone.orthant(2)


def as_csv(rows) -> str:
    """CSV form of a fixture row list (id plus two criteria)."""
    lines = ["id,c1,c2"]
    for pid, coords in rows:
        lines.append(f"{pid},{coords[0]},{coords[1]}")
    return "\n".join(lines) + "\n"
