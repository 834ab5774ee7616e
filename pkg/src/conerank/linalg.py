"""Small exact linear algebra over Fractions (matrices are at most ~dozens
of rows by d <= 6 columns; no pivoting heuristics needed beyond nonzero)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .rationals import normalize_direction

Matrix = list[list[Fraction]]


def _to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(c) for c in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; returns (matrix, pivot column indices)."""
    m = _to_matrix(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(r, len(m)):
            if m[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pv = m[r][col]
        m[r] = [c / pv for c in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace_basis(rows: Sequence[Sequence], dim: int | None = None) -> list[tuple[int, ...]]:
    """Integer basis of {v : row · v = 0 for all rows}.

    `dim` is required when `rows` is empty.
    """
    if not rows:
        if dim is None:
            raise ValueError("dimension needed for empty constraint set")
        return [tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)]
    ncols = len(rows[0])
    m, pivots = rref(rows)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for j in free:
        v = [Fraction(0)] * ncols
        v[j] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][j]
        basis.append(normalize_direction(v))
    return basis


def row_space_basis(rows: Sequence[Sequence]) -> list[tuple[int, ...]]:
    m, pivots = rref(rows)
    return [normalize_direction(m[i]) for i in range(len(pivots))]


def solve(a_rows: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of A x = b, or None if inconsistent (least-norm not
    attempted; underdetermined systems fix free variables at 0)."""
    aug = [list(map(Fraction, row)) + [Fraction(bv)] for row, bv in zip(a_rows, b)]
    ncols = len(a_rows[0])
    m, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = m[i][-1]
    return x
