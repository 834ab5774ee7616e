"""Level-set classification and preference-cone alignment.

The upper level set at threshold n collects every point whose cone rank
reaches n; thresholds give nested sets, quantile-style selections, a
good/bad/ugly clustering (rank under the cone vs under its negation), a
supervised threshold fit by exhaustive scan, label propagation along the
order relation, and a rotation of the preference cone toward the
maximum-margin separating direction of labeled data.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Sequence

import numpy as np

from .geometry import GeometryError, PolyhedralCone, leq_cone
from .rationals import as_fraction
from .ranking import AlternativeSet, RankingInputError, rank_all, rank_cone

ACCEPTABLE = "acceptable"
UNACCEPTABLE = "unacceptable"
UNLABELED = "unlabeled"


class NotSeparableError(ValueError):
    """Labeled classes cannot be separated by a hyperplane."""


@dataclass(frozen=True)
class LevelSetQuery:
    X: AlternativeSet
    cone: PolyhedralCone
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise RankingInputError("level threshold must be >= 0")


def level_member(query: LevelSetQuery, z: Sequence) -> bool:
    """z belongs to the level set iff its cone rank reaches the threshold."""
    if query.n == 0:
        return True
    return rank_cone(query.X, query.cone, z).value >= query.n


def alpha_best(
    X: AlternativeSet, cone: PolyhedralCone, alpha
) -> tuple[int, tuple[str, ...]]:
    """Largest threshold n whose level set still captures at least
    alpha percent of the alternatives (exact, unrounded inequality)."""
    a = as_fraction(alpha)
    if not 0 < a <= 100:
        raise RankingInputError("alpha must be a percentage in (0, 100]")
    ranks = {i: r.value for i, r in rank_all(X, cone).items()}
    need = Fraction(X.size) * a / 100
    best_n = 0
    for n in range(0, X.size + 1):
        if sum(1 for v in ranks.values() if v >= n) >= need:
            best_n = n
        else:
            break
    members = tuple(sorted(i for i, v in ranks.items() if v >= best_n))
    return best_n, members


@dataclass(frozen=True)
class GbuPartition:
    good: tuple[str, ...]
    bad: tuple[str, ...]
    ugly: tuple[str, ...]
    overlap: tuple[str, ...]  # qualified for both sides with equal ranks
    threshold: int


def cluster_gbu(X: AlternativeSet, cone: PolyhedralCone) -> GbuPartition:
    """Partition by rank >= ceil(N/2) under the cone (good), under its
    negation (bad), or neither (ugly: the non-comparable deviants).

    A point qualifying on both sides goes to the side with the strictly
    larger rank; exact ties go to ugly with an overlap flag, keeping the
    partition a partition.
    """
    t = ceil(X.size / 2)
    up = {i: r.value for i, r in rank_all(X, cone).items()}
    down = {i: r.value for i, r in rank_all(X, cone.negate()).items()}
    good, bad, ugly, overlap = [], [], [], []
    for i in X.ids:
        g = up[i] >= t
        b = down[i] >= t
        if g and b:
            if up[i] > down[i]:
                good.append(i)
            elif down[i] > up[i]:
                bad.append(i)
            else:
                ugly.append(i)
                overlap.append(i)
        elif g:
            good.append(i)
        elif b:
            bad.append(i)
        else:
            ugly.append(i)
    return GbuPartition(tuple(good), tuple(bad), tuple(ugly), tuple(overlap), t)


@dataclass(frozen=True)
class LabeledSet:
    """Alternatives plus a partial acceptable/unacceptable labeling."""

    X: AlternativeSet
    labels: dict[str, str] = field(default_factory=dict)
    conflicts: tuple[str, ...] = ()

    def __post_init__(self):
        for pid, lab in self.labels.items():
            if pid not in self.X:
                raise RankingInputError(f"label for unknown id {pid!r}")
            if lab not in (ACCEPTABLE, UNACCEPTABLE):
                raise RankingInputError(f"bad label {lab!r} for {pid!r}")

    def label_of(self, pid: str) -> str:
        return self.labels.get(pid, UNLABELED)

    @property
    def labeled_ids(self) -> tuple[str, ...]:
        return tuple(i for i in self.X.ids if i in self.labels)


@dataclass(frozen=True)
class ClassificationModel:
    """Threshold model: predict acceptable iff the cone rank reaches n.

    refresh_after is a plain config knob: how many new data points may
    arrive before the model should be refit (None = never). No further
    semantics are attached to it.
    """

    X: AlternativeSet
    cone: PolyhedralCone
    n: int
    error_rate: Fraction
    false_positives: int
    false_negatives: int
    refresh_after: int | None = None

    def predict(self, z: Sequence) -> str:
        r = rank_cone(self.X, self.cone, z).value
        return ACCEPTABLE if r >= self.n else UNACCEPTABLE

    def predict_id(self, pid: str, ranks: dict[str, int]) -> str:
        return ACCEPTABLE if ranks[pid] >= self.n else UNACCEPTABLE

    def needs_refresh(self, new_data_count: int) -> bool:
        return self.refresh_after is not None and new_data_count >= self.refresh_after


def fit_threshold(L: LabeledSet, cone: PolyhedralCone) -> ClassificationModel:
    """Exhaustive scan over thresholds 0..N+1 minimizing false positives plus
    false negatives on the labeled points; ties break to the smallest n."""
    if not L.labels:
        raise RankingInputError("supervised fit needs at least one label")
    ranks = {i: r.value for i, r in rank_all(L.X, cone).items()}
    best = None
    for n in range(0, L.X.size + 2):
        fp = sum(
            1
            for i, lab in L.labels.items()
            if lab == UNACCEPTABLE and ranks[i] >= n
        )
        fn = sum(
            1
            for i, lab in L.labels.items()
            if lab == ACCEPTABLE and ranks[i] < n
        )
        if best is None or fp + fn < best[0]:
            best = (fp + fn, n, fp, fn)
    errors, n, fp, fn = best
    return ClassificationModel(
        X=L.X,
        cone=cone,
        n=n,
        error_rate=Fraction(errors, len(L.labels)),
        false_positives=fp,
        false_negatives=fn,
    )


def propagate_labels(L: LabeledSet, cone: PolyhedralCone) -> LabeledSet:
    """Spread labels along the order: unlabeled points above an acceptable
    point become acceptable, below an unacceptable point unacceptable.
    Conflicting evidence leaves the point unlabeled and flagged. Existing
    labels are never rewritten; one pass is idempotent because the order is
    transitive."""
    acc = [L.X.vector(i) for i, lab in L.labels.items() if lab == ACCEPTABLE]
    una = [L.X.vector(i) for i, lab in L.labels.items() if lab == UNACCEPTABLE]
    new_labels = dict(L.labels)
    conflicts = []
    for p in L.X.points:
        if p.id in L.labels:
            continue
        above_acc = any(leq_cone(cone, a, p.coords) for a in acc)
        below_una = any(leq_cone(cone, p.coords, u) for u in una)
        if above_acc and below_una:
            conflicts.append(p.id)
        elif above_acc:
            new_labels[p.id] = ACCEPTABLE
        elif below_una:
            new_labels[p.id] = UNACCEPTABLE
    return LabeledSet(X=L.X, labels=new_labels, conflicts=tuple(conflicts))


# ---------------------------------------------------------------------------
# maximum-margin separation and cone rotation


def _hull_closest_pair(A: np.ndarray, B: np.ndarray) -> tuple[np.ndarray, float]:
    """Difference vector between the closest points of two point-set hulls.

    d <= 3: exhaustive search over simplex pairs with up to d+1 total
    vertices (the closest pair lies on faces of that size). Larger d: a
    Frank-Wolfe style iteration on the squared distance, vertex steps only.
    """
    d = A.shape[1]
    if d <= 3:
        best = None
        for ka in range(1, d + 2):
            for kb in range(1, d + 2 - (ka - 1)):
                for ia in itertools.combinations(range(len(A)), ka):
                    SA = A[list(ia)]
                    for ib in itertools.combinations(range(len(B)), kb):
                        SB = B[list(ib)]
                        pair = _simplex_pair_closest(SA, SB)
                        if pair is None:
                            continue
                        diff, dist2 = pair
                        if best is None or dist2 < best[1]:
                            best = (diff, dist2)
        return best
    # Frank-Wolfe on ||sum(la*A) - sum(mu*B)||^2 over product of simplices
    la = np.full(len(A), 1.0 / len(A))
    mu = np.full(len(B), 1.0 / len(B))
    for it in range(2000):
        diff = la @ A - mu @ B
        grad_a = 2 * A @ diff
        grad_b = -2 * B @ diff
        sa = np.zeros_like(la)
        sa[np.argmin(grad_a)] = 1.0
        sb = np.zeros_like(mu)
        sb[np.argmin(grad_b)] = 1.0
        step = 2.0 / (it + 2)
        la = (1 - step) * la + step * sa
        mu = (1 - step) * mu + step * sb
    diff = la @ A - mu @ B
    return diff, float(diff @ diff)


def _simplex_pair_closest(SA: np.ndarray, SB: np.ndarray):
    """Closest points between the affine hulls of two vertex sets, kept only
    when the minimizer has nonnegative barycentric coordinates."""
    ka, kb = len(SA), len(SB)
    base = SA[0] - SB[0]
    dirs = np.vstack([SA[1:] - SA[0], -(SB[1:] - SB[0])]) if ka + kb > 2 else None
    if dirs is None or len(dirs) == 0:
        diff = base
        return diff, float(diff @ diff)
    gram = dirs @ dirs.T
    rhs = -dirs @ base
    try:
        coef, *_ = np.linalg.lstsq(gram, rhs, rcond=None)
    except np.linalg.LinAlgError:
        return None
    ca = coef[: ka - 1]
    cb = coef[ka - 1 :]
    if ca.sum() > 1 + 1e-9 or cb.sum() > 1 + 1e-9:
        return None
    if (ca < -1e-9).any() or (cb < -1e-9).any():
        return None
    pa = SA[0] + ca @ (SA[1:] - SA[0]) if ka > 1 else SA[0]
    pb = SB[0] + cb @ (SB[1:] - SB[0]) if kb > 1 else SB[0]
    diff = pa - pb
    return diff, float(diff @ diff)


def svm_direction(L: LabeledSet) -> tuple[float, ...]:
    """Normal of the maximum-margin separating hyperplane, oriented toward
    the acceptable class. Hard margin: raises when the hulls touch."""
    acc = np.array(
        [list(map(float, L.X.vector(i))) for i, lab in L.labels.items() if lab == ACCEPTABLE]
    )
    una = np.array(
        [list(map(float, L.X.vector(i))) for i, lab in L.labels.items() if lab == UNACCEPTABLE]
    )
    if len(acc) == 0 or len(una) == 0:
        raise RankingInputError("need labeled points of both classes")
    diff, dist2 = _hull_closest_pair(acc, una)
    scale = max(
        1.0,
        float(np.abs(acc).max(initial=0.0)),
        float(np.abs(una).max(initial=0.0)),
    )
    if dist2 <= (1e-9 * scale) ** 2:
        raise NotSeparableError("labeled classes are not linearly separable")
    w = diff / np.sqrt(dist2)
    return tuple(float(c) for c in w)


def interior_dual_direction(cone: PolyhedralCone) -> tuple[float, ...]:
    """Mean of the Euclidean-normalized dual generators."""
    rays = np.array(cone.facet_normals, dtype=float)
    rays /= np.linalg.norm(rays, axis=1, keepdims=True)
    w = rays.mean(axis=0)
    return tuple(float(c) for c in w)


def rotation_between(u: Sequence[float], v: Sequence[float]) -> np.ndarray:
    """Rotation carrying direction u to direction v within span{u, v} and
    fixing the orthogonal complement."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    c = float(u @ v)
    if c > 1 - 1e-14:
        return np.eye(len(u))
    if c < -1 + 1e-12:
        raise GeometryError(
            "separating direction is antipodal to the dual interior; rotation plane undefined"
        )
    v_perp = v - c * u
    v_perp = v_perp / np.linalg.norm(v_perp)
    s = float(v @ v_perp)
    eye = np.eye(len(u))
    uu = np.outer(u, u)
    pp = np.outer(v_perp, v_perp)
    up = np.outer(v_perp, u) - np.outer(u, v_perp)
    return eye + (c - 1) * (uu + pp) + s * up


def align_cone_svm(
    L: LabeledSet, cone: PolyhedralCone, max_denominator: int = 10**6
) -> PolyhedralCone:
    """Rotate the preference cone so its dual points along the max-margin
    separating direction of the labeled classes.

    Rotates every dual generator by the rotation carrying the dual interior
    direction to the separating normal, then rebuilds the cone from the
    rationalized rotated generators.
    """
    w_svm = svm_direction(L)
    w_int = interior_dual_direction(cone)
    rot = rotation_between(w_int, w_svm)
    rays = np.array(cone.facet_normals, dtype=float)
    rays /= np.linalg.norm(rays, axis=1, keepdims=True)
    rotated = rays @ rot.T
    rational = [
        tuple(Fraction(float(c)).limit_denominator(max_denominator) for c in row)
        for row in rotated
    ]
    return PolyhedralCone.from_dual_rays(rational, dim=cone.dim)
