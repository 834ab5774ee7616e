"""Exact rational ingestion and canonical integer vector forms.

All geometric computation downstream runs on integers (directions are
scale-free) or Fractions (affine data). Floats are rationalized on ingestion
via their shortest round-tripping decimal, so 0.7 becomes 7/10, not the
53-bit binary expansion.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]
IntVec = tuple[int, ...]


def as_fraction(x) -> Fraction:
    """Coerce a number-like input to an exact Fraction.

    Accepts int, Fraction, float (via repr, so 0.7 -> 7/10) and strings
    ("0.7", "7/10", "-3").
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("boolean is not a coordinate value")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite coordinate: {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational number")


def as_vector(coords: Iterable) -> Vec:
    v = tuple(as_fraction(c) for c in coords)
    if len(v) < 1:
        raise ValueError("empty coordinate vector")
    return v


def integerize(v: Sequence[Fraction]) -> IntVec:
    """Scale a rational vector by the LCM of denominators to integers."""
    mult = 1
    for c in v:
        den = c.denominator
        mult = mult // gcd(mult, den) * den
    return tuple(int(c * mult) for c in v)


def normalize_direction(v: Sequence[int | Fraction]) -> IntVec:
    """Canonical form of a nonzero direction: coprime integers, sign kept.

    Two vectors are positive multiples of each other iff their canonical
    forms are equal.
    """
    iv = integerize([as_fraction(c) for c in v])
    g = 0
    for c in iv:
        g = gcd(g, abs(c))
    if g == 0:
        raise ValueError("zero vector has no direction")
    return tuple(c // g for c in iv)


def is_zero(v: Sequence) -> bool:
    return all(c == 0 for c in v)


def dot(a: Sequence, b: Sequence):
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum(x * y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def scale(v: Sequence, s) -> tuple:
    return tuple(s * x for x in v)


def neg(v: Sequence) -> tuple:
    return tuple(-x for x in v)


def fraction_str(x: Fraction) -> str:
    """Exact wire form: "num/den" (or "num" for integers)."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def unit_sum_weights(v: Sequence[int | Fraction]) -> Vec:
    """Normalize a direction for reporting as a weight vector.

    Divides by the coordinate sum when positive (the weight-vector regime);
    falls back to the L1 norm for sum-zero or negative-sum directions, which
    occur with general cones.
    """
    fv = [as_fraction(c) for c in v]
    s = sum(fv)
    if s <= 0:
        s = sum(abs(c) for c in fv)
    if s == 0:
        raise ValueError("zero vector has no weight normalization")
    return tuple(c / s for c in fv)
