"""Exact cone ranking of alternatives.

The rank of a query point z against the alternative set X under cone C is the
minimum, over admissible weight vectors w in the dual cone, of the number of
alternatives whose w-weighted sum does not exceed that of z. The count is a
piecewise-constant function of w over the central hyperplane arrangement
spanned by the difference vectors x_i - z together with the facets of the
dual cone, so the minimum is attained on full-dimensional cells of that
arrangement and can be computed exactly by sampling one rational point per
cell:

* d = 2: angular sweep. Candidates are the dual cone's generators, the
  in-cone directions orthogonal to each difference, and a midpoint direction
  inside every angular cell between consecutive candidates.
* d >= 3: arrangement-face enumeration. Candidate rays come from independent
  (k-1)-subsets of the deduplicated hyperplane normals; at each face sample
  the active normals are projected into their span and the enumeration
  recurses there, so a perturbed sample is produced for every cell adjacent
  to the face. Perturbation size is half the minimum nonzero |h.s| over the
  sample, scaled per direction, which cannot flip any inactive sign.

All candidate weights are concrete coprime-integer vectors inside the dual
cone; re-counting at any returned witness reproduces the rank value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from .geometry import GeometryError, PolyhedralCone
from .linalg import nullspace_basis, rank as mat_rank
from .rationals import (
    IntVec,
    Vec,
    as_fraction,
    as_vector,
    dot,
    is_zero,
    normalize_direction,
    sub,
    unit_sum_weights,
)

DEFAULT_SEED = 0

# int64 counting is safe while |w . x| stays clear of 2^63
_INT64_SAFE = 2**62


class RankingInputError(ValueError):
    """Bad ranking input (zero weight, dimension mismatch, too few points)."""


@dataclass(frozen=True)
class LabeledPoint:
    id: str
    coords: Vec


@dataclass(frozen=True)
class AlternativeSet:
    """Finite labeled set of d-dimensional alternatives (N >= 2, unique ids)."""

    points: tuple[LabeledPoint, ...]

    def __post_init__(self):
        if len(self.points) < 2:
            raise RankingInputError("an alternative set needs at least two points")
        dims = {len(p.coords) for p in self.points}
        if len(dims) != 1:
            raise RankingInputError(f"mixed dimensions in alternative set: {sorted(dims)}")
        if next(iter(dims)) < 2:
            raise RankingInputError("alternatives need at least two criteria")
        ids = [p.id for p in self.points]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise RankingInputError(f"duplicate ids: {dup}")
        object.__setattr__(self, "_index", {p.id: p for p in self.points})

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[str, Sequence]]) -> "AlternativeSet":
        return cls(tuple(LabeledPoint(str(i), as_vector(c)) for i, c in rows))

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence], prefix: str = "x") -> "AlternativeSet":
        return cls.from_rows((f"{prefix}{k + 1}", v) for k, v in enumerate(vectors))

    @property
    def dim(self) -> int:
        return len(self.points[0].coords)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.points)

    def __getitem__(self, pid: str) -> LabeledPoint:
        return self._index[pid]

    def __contains__(self, pid: str) -> bool:
        return pid in self._index

    def vector(self, pid: str) -> Vec:
        return self._index[pid].coords


@dataclass(frozen=True)
class RankResult:
    """Exact rank with the weights that attain it.

    witness_weights are unit-sum-normalized directions in the dual cone,
    lexicographically ordered; counted_ids is the set counted under the first
    witness.
    """

    value: int
    witness_weights: tuple[Vec, ...]
    counted_ids: tuple[str, ...]


# ---------------------------------------------------------------------------
# integer scaffolding


def _integerize_points(X: AlternativeSet, z: Vec) -> tuple[list[IntVec], IntVec]:
    """Common-denominator scaling of X and z (counts are scale-invariant)."""
    mult = 1
    for p in X.points:
        for c in p.coords:
            mult = lcm(mult, c.denominator)
    for c in z:
        mult = lcm(mult, c.denominator)
    pts = [tuple(int(c * mult) for c in p.coords) for p in X.points]
    zi = tuple(int(c * mult) for c in z)
    return pts, zi


def _norm_int(v: Sequence[int]) -> IntVec:
    """Coprime form of a nonzero integer vector, sign kept (fast path of
    rationals.normalize_direction for inputs that are already integral)."""
    g = 0
    for c in v:
        g = gcd(g, c)
    if g == 0:
        raise ValueError("zero vector has no direction")
    return tuple(c // g for c in v)


def _int_dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


class _Counter:
    """Counts #{x : w.x <= w.z} for integer w, with an int64 fast path."""

    def __init__(self, points_int: list[IntVec], z_int: IntVec):
        self.points = points_int
        self.z = z_int
        self.dim = len(z_int)
        coord_max = max(
            (abs(c) for p in points_int for c in p), default=0
        )
        self.coord_max = max(coord_max, max((abs(c) for c in z_int), default=0), 1)
        self._np = np.array(points_int, dtype=np.int64)
        self._npz = np.array(z_int, dtype=np.int64)

    def _safe(self, w: Sequence[int]) -> bool:
        return max(abs(c) for c in w) * self.coord_max * self.dim < _INT64_SAFE

    def count(self, w: IntVec) -> int:
        if self._safe(w):
            wv = np.array(w, dtype=np.int64)
            return int(((self._np @ wv) <= int(self._npz @ wv)).sum())
        zdot = _int_dot(self.z, w)
        return sum(1 for p in self.points if _int_dot(p, w) <= zdot)

    def counts(self, ws: list[IntVec]) -> list[int]:
        """Batched counting; oversized candidates fall back to exact ints."""
        safe = [self._safe(w) for w in ws]
        out = [0] * len(ws)
        idx = [i for i, ok in enumerate(safe) if ok]
        if idx:
            mat = np.array([ws[i] for i in idx], dtype=np.int64)
            scores = mat @ self._np.T  # n_safe x N
            zs = mat @ self._npz
            vals = (scores <= zs[:, None]).sum(axis=1)
            for i, v in zip(idx, vals):
                out[i] = int(v)
        for i, ok in enumerate(safe):
            if not ok:
                zdot = _int_dot(self.z, w := ws[i])
                out[i] = sum(1 for p in self.points if _int_dot(p, w) <= zdot)
        return out


def _canonical_line(v: Sequence[int]) -> IntVec:
    """Line through ±v in a sign-canonical coprime form."""
    n = _norm_int(v)
    for c in n:
        if c > 0:
            return n
        if c < 0:
            return tuple(-x for x in n)
    raise ValueError("zero vector")


def _dedup_lines(vectors: Iterable[Sequence[int]]) -> list[IntVec]:
    seen: dict[IntVec, None] = {}
    for v in vectors:
        if is_zero(v):
            continue
        seen[_canonical_line(tuple(v))] = None
    return list(seen)


# ---------------------------------------------------------------------------
# w-ranking


def rank_w(X: AlternativeSet, w: Sequence, z: Sequence) -> int:
    """#{x in X : w.x <= w.z}, exact."""
    fw = as_vector(w)
    fz = as_vector(z)
    if len(fw) != X.dim or len(fz) != X.dim:
        raise RankingInputError(
            f"dimension mismatch: set is {X.dim}-dimensional, w has {len(fw)}, z has {len(fz)}"
        )
    if is_zero(fw):
        raise RankingInputError("zero weight vector")
    wi = normalize_direction(fw)
    pts, zi = _integerize_points(X, fz)
    return _Counter(pts, zi).count(wi)


# ---------------------------------------------------------------------------
# d = 2 angular sweep


def _rot90(v: IntVec) -> IntVec:
    return (-v[1], v[0])


def _cross(u: IntVec, v: IntVec) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _sweep_candidates(diff_lines: list[IntVec], cone: PolyhedralCone) -> list[IntVec]:
    in_dual = lambda w: all(dot(r, w) >= 0 for r in cone.rays)
    cands: dict[IntVec, None] = {}
    for g in cone.facet_normals:  # generators of the dual cone
        cands[normalize_direction(g)] = None
    for h in diff_lines:
        for w in (_rot90(h), _rot90(tuple(-c for c in h))):
            if in_dual(w):
                cands[normalize_direction(w)] = None
    dirs = list(cands)

    # angular order within the dual wedge (opening <= pi): start from the
    # direction that has every other one counterclockwise of it
    start = None
    for c in dirs:
        if all(_cross(c, u) >= 0 for u in dirs):
            start = c
            break
    if start is None:  # cannot happen for a pointed primal cone
        raise GeometryError("dual cone spans more than a halfplane")
    rest = [u for u in dirs if u != start]

    def at_pi(u: IntVec) -> bool:
        return _cross(start, u) == 0 and dot(start, u) < 0

    import functools

    def cmp(u: IntVec, v: IntVec) -> int:
        if at_pi(u) != at_pi(v):
            return 1 if at_pi(u) else -1
        c = _cross(u, v)
        return -1 if c > 0 else (1 if c < 0 else 0)

    ordered = [start] + sorted(rest, key=functools.cmp_to_key(cmp))

    out = dict.fromkeys(ordered)
    for u, v in zip(ordered, ordered[1:]):
        su = sum(abs(c) for c in u)
        sv = sum(abs(c) for c in v)
        mid = tuple(a * sv + b * su for a, b in zip(u, v))
        if not is_zero(mid) and in_dual(mid):
            out[normalize_direction(mid)] = None
    return list(out)


# ---------------------------------------------------------------------------
# general arrangement enumeration (any d, used for d >= 3)


def _cross3(h1: Sequence[int], h2: Sequence[int]) -> IntVec:
    return (
        h1[1] * h2[2] - h1[2] * h2[1],
        h1[2] * h2[0] - h1[0] * h2[2],
        h1[0] * h2[1] - h1[1] * h2[0],
    )


def _ray_through(subset: tuple[IntVec, ...], k: int) -> IntVec | None:
    """Generator of the 1-dim common nullspace of an independent (k-1)-subset."""
    if k == 1:
        return (1,)
    if k == 2:
        (h,) = subset
        return _rot90(h)
    if k == 3:
        v = _cross3(*subset)
        return None if is_zero(v) else _norm_int(v)
    if mat_rank(subset) != k - 1:
        return None
    ns = nullspace_basis(subset, dim=k)
    return ns[0] if len(ns) == 1 else None


def _push_off(s: IntVec, delta: IntVec, normals: list[IntVec]) -> IntVec:
    """s + eps*delta with eps = half the minimum nonzero |h.s| / |h.delta|,
    so no inactive sign can flip."""
    num, den = 1, 1
    found = False
    for h in normals:
        hs = _int_dot(h, s)
        if hs == 0:
            continue
        hd = _int_dot(h, delta)
        if hd == 0:
            continue
        n_, d_ = abs(hs), 2 * abs(hd)
        if not found or n_ * den < num * d_:
            num, den = n_, d_
            found = True
    return tuple(den * si + num * di for si, di in zip(s, delta))


def _span_basis(vectors: list[IntVec], k: int) -> list[IntVec]:
    """Greedy independent subset spanning span(vectors); any basis works for
    the sign-preserving Gram projection used below. Callers only reach the
    k = 2, 3 fast paths with spans of dimension <= 2 (the vectors are
    orthogonal to a nonzero ray or have a nontrivial common nullspace)."""
    if k == 3:
        b1 = vectors[0]
        for h in vectors[1:]:
            if not is_zero(_cross3(b1, h)):
                return [b1, h]
        return [b1]
    if k == 2:
        b1 = vectors[0]
        for h in vectors[1:]:
            if _cross(b1, h) != 0:
                return [b1, h]
        return [b1]
    basis: list[IntVec] = []
    r = 0
    for h in vectors:
        if mat_rank(basis + [h]) > r:
            basis.append(h)
            r += 1
            if r == k:
                break
    return basis


def _independent(active: list[IntVec], k: int) -> bool:
    """Linear independence of deduplicated lines (distinct lines, so any two
    are independent)."""
    j = len(active)
    if j > k:
        return False
    if j <= 1:
        return True
    if j == 2:
        return True
    if j == 3 and k >= 3:
        if k == 3:
            return _int_dot(_cross3(active[0], active[1]), active[2]) != 0
        return mat_rank(active) == 3
    return mat_rank(active) == j


def _dual_deltas(active: list[IntVec], k: int) -> list[IntVec]:
    """Directions realizing every sign pattern of an independent active set:
    sign combinations of the dual basis u_i (h_i . u_l = det * delta_il)."""
    j = len(active)
    if j == 1:
        h = active[0]
        return [h, tuple(-c for c in h)]
    if j == 2:
        h1, h2 = active
        a, b, c = _int_dot(h1, h1), _int_dot(h1, h2), _int_dot(h2, h2)
        u1 = tuple(c * x - b * y for x, y in zip(h1, h2))
        u2 = tuple(a * y - b * x for x, y in zip(h1, h2))
        us = [u1, u2]
    else:
        from .linalg import solve

        gram = [[_int_dot(hi, hl) for hl in active] for hi in active]
        us = []
        for i in range(j):
            coeffs = solve(gram, [1 if l == i else 0 for l in range(j)])
            u = tuple(
                sum(coeffs[l] * active[l][t] for l in range(j)) for t in range(k)
            )
            us.append(normalize_direction(u))
    out = []
    for signs in itertools.product((1, -1), repeat=j):
        delta = tuple(
            sum(s * u[t] for s, u in zip(signs, us)) for t in range(k)
        )
        out.append(_norm_int(delta))
    return out


def _adjacent_deltas(active: list[IntVec], k: int) -> list[IntVec]:
    """Directions hitting every full-dimensional cell of the local central
    arrangement of `active` (all cells adjacent to the sampled face)."""
    if _independent(active, k):
        return _dual_deltas(active, k)
    basis = _span_basis(active, k)
    j = len(basis)
    proj = _dedup_lines(tuple(_int_dot(b, h) for b in basis) for h in active)
    out = []
    for dk in _cell_dirs(proj, j):
        out.append(
            _norm_int(
                tuple(sum(dk[i] * basis[i][t] for i in range(j)) for t in range(k))
            )
        )
    return out


def _cell_dirs(normals: list[IntVec], k: int, keep=None) -> list[IntVec]:
    """One interior direction per full-dimensional cell of the central
    arrangement of `normals` in R^k. Requires the normals to span R^k, which
    makes every cell pointed, so every cell is adjacent to a candidate ray
    from some independent (k-1)-subset. `keep` prunes ray samples (cells
    inside the dual cone keep all their extreme rays inside it, so pruning
    out-of-cone rays never loses an in-cone cell)."""
    rays: dict[IntVec, None] = {}
    for subset in itertools.combinations(normals, k - 1):
        v = _ray_through(subset, k)
        if v is None:
            continue
        rays[v] = None
        rays[tuple(-c for c in v)] = None
    out: dict[IntVec, None] = {}
    for s in rays:
        if keep is not None and not keep(s):
            continue
        active = [h for h in normals if _int_dot(h, s) == 0]
        if not active:
            out[s] = None
            continue
        for delta in _adjacent_deltas(active, k):
            out[_norm_int(_push_off(s, delta, normals))] = None
    return list(out)


def _general_candidates(diff_lines: list[IntVec], cone: PolyhedralCone) -> list[IntVec]:
    lines = _dedup_lines(list(diff_lines) + list(cone.rays))
    d = cone.dim
    cone_rays = cone.rays

    def in_dual(w: IntVec) -> bool:
        return all(_int_dot(r, w) >= 0 for r in cone_rays)

    common = nullspace_basis(lines, dim=d)
    if common:
        basis = _span_basis(lines, d)
        k = len(basis)
        proj = _dedup_lines(tuple(_int_dot(b, h) for b in basis) for h in lines)

        def lift(dk: IntVec) -> IntVec:
            return tuple(sum(dk[i] * basis[i][t] for i in range(k)) for t in range(d))

        dirs = _cell_dirs(proj, k, keep=lambda s: in_dual(lift(s)))
        lifted = [lift(dk) for dk in dirs]
    else:
        lifted = _cell_dirs(lines, d, keep=in_dual)
    cands: dict[IntVec, None] = {}
    for w in lifted:
        if not is_zero(w) and in_dual(w):
            cands[_norm_int(w)] = None
    return list(cands)


# ---------------------------------------------------------------------------
# cone ranking


def _evaluate(
    X: AlternativeSet, cone: PolyhedralCone, z: Vec, method: str | None
) -> RankResult:
    pts, zi = _integerize_points(X, z)
    counter = _Counter(pts, zi)
    diff_lines = _dedup_lines(sub(p, zi) for p in pts)

    if method is None:
        method = "sweep" if cone.dim == 2 else "general"
    if method == "sweep":
        if cone.dim != 2:
            raise RankingInputError("the angular sweep is a d=2 evaluator")
        candidates = _sweep_candidates(diff_lines, cone)
    elif method == "general":
        candidates = _general_candidates(diff_lines, cone)
    else:
        raise ValueError(f"unknown method {method!r}")
    if not candidates:
        raise GeometryError("no admissible weight directions found (degenerate cone)")

    values = counter.counts(candidates)
    best = min(values)
    witnesses = sorted(
        {unit_sum_weights(w): w for w, c in zip(candidates, values) if c == best}.items()
    )
    first = witnesses[0][1]
    zdot = dot(zi, first)
    counted = tuple(
        sorted(p.id for p, pi in zip(X.points, pts) if dot(pi, first) <= zdot)
    )
    return RankResult(
        value=best,
        witness_weights=tuple(w for w, _ in witnesses),
        counted_ids=counted,
    )


def rank_cone(
    X: AlternativeSet,
    cone: PolyhedralCone,
    z: Sequence,
    method: str | None = None,
) -> RankResult:
    """Exact minimum of rank_w over the dual cone, with attaining weights.

    Requires a proper, pointed, polyhedral cone; z may be any point of R^d.
    """
    cone.require_ranking_usable()
    fz = as_vector(z)
    if len(fz) != X.dim or cone.dim != X.dim:
        raise RankingInputError(
            f"dimension mismatch: set {X.dim}, cone {cone.dim}, z {len(fz)}"
        )
    return _evaluate(X, cone, fz, method)


def rank_all(
    X: AlternativeSet,
    cone: PolyhedralCone,
    method: str | None = None,
    workers: int | None = None,
) -> dict[str, RankResult]:
    """rank_cone for every member of X; per-point evaluations independent."""
    cone.require_ranking_usable()
    if cone.dim != X.dim:
        raise RankingInputError(f"dimension mismatch: set {X.dim}, cone {cone.dim}")
    if workers and workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(
                ex.map(lambda p: _evaluate(X, cone, p.coords, method), X.points)
            )
        return {p.id: r for p, r in zip(X.points, results)}
    return {p.id: _evaluate(X, cone, p.coords, method) for p in X.points}


# ---------------------------------------------------------------------------
# sampling oracle (independent verification; an upper bound on the exact rank)


def _oracle_dirs(cone: PolyhedralCone, samples: int, seed: int) -> np.ndarray:
    rays = np.array(cone.facet_normals, dtype=float)  # generators of the dual
    rays /= np.abs(rays).sum(axis=1, keepdims=True)
    rng = np.random.default_rng(seed)
    coeffs = rng.random((samples, rays.shape[0]))
    # avoid the zero corner; rows of coeffs are almost surely nonzero anyway
    coeffs += 1e-12
    combos = coeffs @ rays
    return np.vstack([np.array(cone.facet_normals, dtype=float), combos])


def rank_cone_oracle(
    X: AlternativeSet,
    cone: PolyhedralCone,
    z: Sequence,
    samples: int,
    seed: int = DEFAULT_SEED,
) -> int:
    """Minimum of rank_w over sampled dual directions: random convex
    combinations of the dual generators plus the generators themselves."""
    cone.require_ranking_usable()
    if samples < 1:
        raise RankingInputError("need at least one sample")
    fz = as_vector(z)
    if len(fz) != X.dim:
        raise RankingInputError("dimension mismatch")
    pts, zi = _integerize_points(X, fz)
    dirs = _oracle_dirs(cone, samples, seed)
    scores = np.array(pts, dtype=float) @ dirs.T
    zscore = np.array(zi, dtype=float) @ dirs.T
    counts = (scores <= zscore[None, :]).sum(axis=0)
    return int(counts.min())


def oracle_rank_all(
    X: AlternativeSet,
    cone: PolyhedralCone,
    samples: int,
    seed: int = DEFAULT_SEED,
) -> dict[str, int]:
    """Batched oracle over all members of X (one direction set for all)."""
    from scipy.stats import rankdata

    cone.require_ranking_usable()
    if samples < 1:
        raise RankingInputError("need at least one sample")
    mult = 1
    for p in X.points:
        for c in p.coords:
            mult = lcm(mult, c.denominator)
    pts = np.array(
        [[int(c * mult) for c in p.coords] for p in X.points], dtype=float
    )
    dirs = _oracle_dirs(cone, samples, seed)
    scores = pts @ dirs.T  # N x S
    counts = rankdata(scores, method="max", axis=0)
    mins = counts.min(axis=1)
    return {p.id: int(m) for p, m in zip(X.points, mins)}
