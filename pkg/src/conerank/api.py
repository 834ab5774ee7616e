"""Request processing shared by the CLI and the HTTP service.

Every command builds a plain-dict payload here and serializes it through
to_canonical_bytes, so both frontends emit byte-identical JSON for identical
inputs. Exact values ride along as "num/den" strings next to their float
renderings wherever exactness matters.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence

from . import analysis, baselines, classify, set_ranking
from .geometry import PolyhedralCone, cone_from_config
from .rationals import as_vector, fraction_str, unit_sum_weights
from .ranking import (
    DEFAULT_SEED,
    AlternativeSet,
    RankingInputError,
    oracle_rank_all,
    rank_all,
    rank_cone,
    rank_cone_oracle,
)
from .store import Dataset


def to_canonical_bytes(payload: dict) -> bytes:
    return (json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n").encode()


def _fvec(v) -> list[float]:
    return [float(c) for c in v]


def _evec(v) -> list[str]:
    return [fraction_str(Fraction(c)) for c in v]


def cone_payload(cone: PolyhedralCone) -> dict:
    duals = [unit_sum_weights(r) for r in cone.facet_normals]
    return {
        "dim": cone.dim,
        "rays": [list(r) for r in cone.rays],
        "dual_rays": [list(n) for n in cone.facet_normals],
        "dual_weights": [_fvec(w) for w in duals],
        "dual_weights_exact": [_evec(w) for w in duals],
        "pointed": cone.pointed,
        "full_dimensional": cone.full_dimensional,
    }


def dataset_payload(ds: Dataset) -> dict:
    return {
        "dataset": ds.dataset_id,
        "revision": ds.revision,
        "criteria": list(ds.criteria),
        "size": ds.alternatives.size,
        "dim": ds.alternatives.dim,
        "created_at": ds.created_at,
        "alternatives": {
            p.id: {"coords": _fvec(p.coords), "coords_exact": _evec(p.coords)}
            for p in ds.alternatives.points
        },
        "labels": {k: ds.labels[k] for k in sorted(ds.labels)},
    }


def _points_block(X: AlternativeSet) -> dict:
    return {
        p.id: {"coords": _fvec(p.coords), "coords_exact": _evec(p.coords)}
        for p in X.points
    }


def rank_payload(
    ds: Dataset,
    cone: PolyhedralCone,
    query_points: Sequence | None = None,
    oracle_samples: int | None = None,
    seed: int = DEFAULT_SEED,
) -> dict:
    from .geometry import leq_cone

    X = ds.alternatives
    results = rank_all(X, cone)
    dominated_counts = {
        p.id: sum(
            1
            for q in X.points
            if q.id != p.id
            and leq_cone(cone, q.coords, p.coords)
            and not leq_cone(cone, p.coords, q.coords)
        )
        for p in X.points
    }
    payload = {
        "dataset": ds.dataset_id,
        "revision": ds.revision,
        "cone": cone_payload(cone),
        "points": _points_block(X),
        "ranks": {i: r.value for i, r in results.items()},
        "witnesses": {
            i: [_fvec(w) for w in r.witness_weights] for i, r in results.items()
        },
        "witnesses_exact": {
            i: [_evec(w) for w in r.witness_weights] for i, r in results.items()
        },
        "counted": {i: list(r.counted_ids) for i, r in results.items()},
        "dominated_counts": dominated_counts,
    }
    if query_points:
        queries = {}
        for k, q in enumerate(query_points, 1):
            r = rank_cone(X, cone, as_vector(q))
            queries[f"q{k}"] = {
                "coords": _fvec(as_vector(q)),
                "value": r.value,
                "witnesses": [_fvec(w) for w in r.witness_weights],
                "counted": list(r.counted_ids),
            }
        payload["queries"] = queries
    if oracle_samples:
        payload["oracle"] = oracle_rank_all(X, cone, oracle_samples, seed=seed)
        payload["oracle_samples"] = oracle_samples
        payload["seed"] = seed
    return payload


def setrank_payload(ds: Dataset, cone: PolyhedralCone, sets: dict[str, list]) -> dict:
    X = ds.alternatives
    if not isinstance(sets, dict) or not sets:
        raise RankingInputError('need a nonempty {"name": [members]} mapping')
    blocks = {}
    for name in sorted(sets):
        members_def = sets[name]
        rn = set_ranking.set_rank(members_def, X, cone)
        cx = set_ranking.indicator_cx(members_def, X, cone)
        blocks[name] = {
            "members": [m if isinstance(m, str) else _fvec(as_vector(m)) for m in members_def],
            "set_rank": rn.value,
            "attaining": rn.attaining_label,
            "cx": cx.value,
            "dominated": list(cx.dominated_ids),
        }
    names = sorted(sets)
    comparisons = []
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            comparisons.append(
                {
                    "a": a,
                    "b": b,
                    "a_dominates_b": set_ranking.set_dominates(sets[a], sets[b], X, cone),
                    "b_dominates_a": set_ranking.set_dominates(sets[b], sets[a], X, cone),
                }
            )
    return {
        "dataset": ds.dataset_id,
        "revision": ds.revision,
        "cone": cone_payload(cone),
        "sets": blocks,
        "comparisons": comparisons,
    }


def whatif_payload(
    ds: Dataset,
    cone: PolyhedralCone,
    add: Sequence | None = None,
    remove: Sequence[str] | None = None,
) -> dict:
    """Reversal diff between the stored alternatives and the edited set."""
    X = ds.alternatives
    add = list(add or [])
    remove = list(remove or [])
    for pid in remove:
        if pid not in X:
            raise RankingInputError(f"cannot remove unknown id {pid!r}")
    if add and not remove:
        report = analysis.detect_reversals(X, add, cone)
        after_set, _ = analysis.extend_set(X, add)
    else:
        kept = tuple(p for p in X.points if p.id not in set(remove))
        if len(kept) < 2:
            raise RankingInputError("fewer than two alternatives would remain")
        base = AlternativeSet(kept)
        after_set = analysis.extend_set(base, add)[0] if add else base
        before = {i: r.value for i, r in rank_all(X, cone).items()}
        after_all = {i: r.value for i, r in rank_all(after_set, cone).items()}
        common = [i for i in X.ids if i in after_set]
        report = analysis.ReversalReport(
            pairs=analysis.reversal_pairs(before, after_all, common),
            ranks_before=before,
            ranks_after=after_all,
            addition_ids=tuple(i for i in after_set.ids if i not in X.ids),
        )
    return {
        "dataset": ds.dataset_id,
        "revision": ds.revision,
        "cone": cone_payload(cone),
        "added": [_fvec(as_vector(a)) for a in add],
        "removed": remove,
        "addition_ids": list(report.addition_ids),
        "ranks_before": report.ranks_before,
        "ranks_after": report.ranks_after,
        "points_after": _points_block(after_set),
        "reversals": [
            {
                "x": p.x_id,
                "y": p.y_id,
                "kind": p.kind,
                "ranks_before": list(p.ranks_before),
                "ranks_after": list(p.ranks_after),
            }
            for p in report.pairs
        ],
    }


def classify_payload(
    ds: Dataset,
    cone: PolyhedralCone,
    n: int | None = None,
    alpha=None,
) -> dict:
    X = ds.alternatives
    payload: dict = {
        "dataset": ds.dataset_id,
        "revision": ds.revision,
        "cone": cone_payload(cone),
    }
    gbu = classify.cluster_gbu(X, cone)
    payload["gbu"] = {
        "good": list(gbu.good),
        "bad": list(gbu.bad),
        "ugly": list(gbu.ugly),
        "overlap": list(gbu.overlap),
        "threshold": gbu.threshold,
    }
    if alpha is not None:
        best_n, members = classify.alpha_best(X, cone, alpha)
        payload["alpha_best"] = {
            "alpha": float(alpha),
            "n": best_n,
            "members": list(members),
        }
    labels = {k: v for k, v in ds.labels.items()}
    if labels:
        L = classify.LabeledSet(X, labels)
        ranks = {i: r.value for i, r in rank_all(X, cone).items()}
        if n is None:
            model = classify.fit_threshold(L, cone)
        else:
            fp = sum(
                1 for i, lab in labels.items()
                if lab == classify.UNACCEPTABLE and ranks[i] >= n
            )
            fn = sum(
                1 for i, lab in labels.items()
                if lab == classify.ACCEPTABLE and ranks[i] < n
            )
            model = classify.ClassificationModel(
                X=X, cone=cone, n=n,
                error_rate=Fraction(fp + fn, len(labels)),
                false_positives=fp, false_negatives=fn,
            )
        propagated = classify.propagate_labels(L, cone)
        payload["model"] = {
            "cone": cone_payload(model.cone),
            "n": model.n,
            "error_rate": float(model.error_rate),
            "error_rate_exact": fraction_str(model.error_rate),
            "false_positives": model.false_positives,
            "false_negatives": model.false_negatives,
        }
        payload["predictions"] = {
            i: (classify.ACCEPTABLE if ranks[i] >= model.n else classify.UNACCEPTABLE)
            for i in X.ids
        }
        payload["propagated_labels"] = {
            k: propagated.labels[k] for k in sorted(propagated.labels)
        }
        payload["label_conflicts"] = list(propagated.conflicts)
    elif n is not None:
        raise RankingInputError("threshold given but the dataset has no labels")
    return payload


def align_payload(ds: Dataset, cone: PolyhedralCone) -> dict:
    labels = dict(ds.labels)
    if not labels:
        raise RankingInputError("cone alignment needs a labeled dataset")
    L = classify.LabeledSet(ds.alternatives, labels)
    rotated = classify.align_cone_svm(L, cone)
    before = classify.fit_threshold(L, cone)
    after = classify.fit_threshold(L, rotated)
    return {
        "dataset": ds.dataset_id,
        "revision": ds.revision,
        "w_svm": list(classify.svm_direction(L)),
        "w_int": list(classify.interior_dual_direction(cone)),
        "cone_before": cone_payload(cone),
        "cone_after": cone_payload(rotated),
        "n_before": before.n,
        "n_after": after.n,
        "error_before": float(before.error_rate),
        "error_after": float(after.error_rate),
    }


def compare_payload(ds: Dataset, cone: PolyhedralCone, weights=None) -> dict:
    X = ds.alternatives
    if weights is None:
        duals = [unit_sum_weights(r) for r in cone.facet_normals]
        w = tuple(sum(col) / len(duals) for col in zip(*duals))
    else:
        w = as_vector(weights)
    cfg = baselines.TopsisConfig(
        weights=tuple(Fraction(c) for c in unit_sum_weights(w)),
        criteria_sense=(baselines.BENEFIT,) * X.dim,
    )
    topsis = baselines.topsis_rank(X, cfg)
    wsum = baselines.weighted_sum_rank(X, w)
    ranks = {i: r.value for i, r in rank_all(X, cone).items()}
    return {
        "dataset": ds.dataset_id,
        "revision": ds.revision,
        "cone": cone_payload(cone),
        "weights": _fvec(w),
        "weights_exact": _evec(w),
        "table": [
            {
                "id": i,
                "topsis": topsis[i],
                "weighted_sum": float(wsum[i]),
                "weighted_sum_exact": fraction_str(wsum[i]),
                "cone_rank": ranks[i],
            }
            for i in sorted(X.ids)
        ],
    }


def resolve_cone(config: dict, dim: int) -> PolyhedralCone:
    cone = cone_from_config(config, dim=dim)
    if cone.dim != dim:
        raise RankingInputError(
            f"cone dimension {cone.dim} does not match dataset dimension {dim}"
        )
    return cone
