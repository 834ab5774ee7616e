"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Random suites use integer coordinates so the float arithmetic inside the
sampling oracle is exact, and fixed seeds so every run checks the same
instances.
"""

import json
import logging
import random
import time
from fractions import Fraction

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from conerank import fixtures
from conerank.analysis import (
    check_max_rank_maximality,
    detect_reversals,
    extend_set,
)
from conerank.classify import (
    LabeledSet,
    LevelSetQuery,
    align_cone_svm,
    fit_threshold,
    level_member,
)
from conerank.cli import main as cli_main
from conerank.geometry import PolyhedralCone, leq_cone, lt_cone
from conerank.ranking import (
    AlternativeSet,
    oracle_rank_all,
    rank_all,
    rank_cone,
    rank_w,
)
from conerank.service import create_app
from conerank.set_ranking import indicator_cx, set_dominates, set_rank
from conerank.store import Store

from helpers import (
    random_cone_mix,
    random_instance,
    random_pointed_cone,
    separable_cohort,
)

log = logging.getLogger("acceptance")
ORTH = PolyhedralCone.orthant(2)


def _report(name: str, ok: bool, detail: str = ""):
    line = f"[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    print(line, flush=True)
    assert ok, line


class TestOracleEquivalence2D:
    def test_exact_equals_oracle_on_200_instances(self):
        rng = random.Random(2024)
        t0 = time.time()
        mismatches = 0
        evaluations = 0
        for trial in range(200):
            cone = ORTH if trial % 2 == 0 else random_pointed_cone(rng, 2)
            X = random_instance(rng, 2, n_max=50)
            exact = {i: r.value for i, r in rank_all(X, cone).items()}
            oracle = oracle_rank_all(X, cone, samples=10**4, seed=trial)
            evaluations += X.size
            for i in X.ids:
                if exact[i] != oracle[i]:
                    mismatches += 1
                    log.error("d2 mismatch trial=%s id=%s exact=%s oracle=%s", trial, i, exact[i], oracle[i])
        elapsed = time.time() - t0
        _report(
            "oracle-equivalence-d2",
            mismatches == 0 and elapsed < 120,
            f"200 instances, {evaluations} evaluations, {mismatches} mismatches, {elapsed:.1f}s",
        )


class TestOracleSandwich3D:
    def test_exact_below_oracle_with_high_agreement(self):
        rng = random.Random(3033)
        violations = 0
        equal = 0
        total = 0
        rechecks = 0
        for trial in range(50):
            cone = ORTH.orthant(3) if trial % 2 == 0 else random_pointed_cone(rng, 3)
            X = random_instance(rng, 3, n_max=30, coord_span=20)
            exact = rank_all(X, cone)
            oracle = oracle_rank_all(X, cone, samples=10**5, seed=trial)
            for i in X.ids:
                total += 1
                if exact[i].value > oracle[i]:
                    violations += 1
                    log.error("sandwich violation trial=%s id=%s", trial, i)
                elif exact[i].value == oracle[i]:
                    equal += 1
                else:
                    # thin cell missed by sampling: recheck the witness, never
                    # accept silently
                    rechecks += 1
                    w = exact[i].witness_weights[0]
                    recount = rank_w(X, w, X.vector(i))
                    log.warning(
                        "d3 oracle gap trial=%s id=%s exact=%s oracle=%s witness recount=%s",
                        trial, i, exact[i].value, oracle[i], recount,
                    )
                    assert recount == exact[i].value
        agreement = equal / total
        _report(
            "oracle-sandwich-d3",
            violations == 0 and agreement >= 0.95,
            f"{total} evaluations, agreement {agreement:.3f}, {rechecks} logged rechecks",
        )


class TestRankingContract:
    def test_monotone_on_ten_thousand_comparable_pairs(self):
        rng = random.Random(4099)
        pairs = 0
        strict_pairs = 0
        while pairs < 10**4:
            d = 2 if rng.random() < 0.8 else 3
            cone = random_cone_mix(rng, d)
            base = random_instance(rng, d, n_max=7, coord_span=20)
            # salt with dominated copies so comparable pairs are plentiful
            extra = []
            for p in base.points:
                if rng.random() < 0.7:
                    below = p.coords
                    for r in cone.rays:
                        k = rng.randint(0, 2)
                        below = tuple(a - k * b for a, b in zip(below, r))
                    extra.append(below)
            X, _ = extend_set(base, extra, prefix="low")
            ranks = {i: r.value for i, r in rank_all(X, cone).items()}
            full_dim = cone.full_dimensional
            for a in X.points:
                for b in X.points:
                    if a.id == b.id:
                        continue
                    if leq_cone(cone, a.coords, b.coords):
                        pairs += 1
                        assert ranks[a.id] <= ranks[b.id], (a, b)
                        if full_dim and lt_cone(cone, a.coords, b.coords):
                            strict_pairs += 1
                            assert ranks[a.id] < ranks[b.id], (a, b)
        _report(
            "order-compatibility",
            True,
            f"{pairs} comparable pairs, {strict_pairs} strict, exact",
        )


class TestAffineEquivariance:
    def test_hundred_random_transformations(self):
        from conerank.linalg import rank as mat_rank

        rng = random.Random(5150)
        checked = 0
        for _ in range(100):
            d = 2 if rng.random() < 0.7 else 3
            while True:
                A = [[rng.randint(-3, 3) for _ in range(d)] for _ in range(d)]
                if mat_rank(A) == d:
                    break
            b = [rng.randint(-6, 6) for _ in range(d)]
            X = random_instance(rng, d, n_max=8, coord_span=15)
            cone = random_cone_mix(rng, d)

            def tf(v):
                return tuple(
                    sum(A[i][j] * v[j] for j in range(d)) + b[i] for i in range(d)
                )

            AX = AlternativeSet.from_rows([(p.id, tf(p.coords)) for p in X.points])
            AC = PolyhedralCone.from_rays(
                [
                    tuple(sum(A[i][j] * r[j] for j in range(d)) for i in range(d))
                    for r in cone.rays
                ],
                dim=d,
            )
            before = {i: r.value for i, r in rank_all(X, cone).items()}
            after = {i: r.value for i, r in rank_all(AX, AC).items()}
            assert before == after
            checked += 1
        _report("affine-equivariance", checked == 100, f"{checked}/100 transformations exact")


class TestMaximalityTheorem:
    def test_max_rank_is_maximal_and_converse_fails(self):
        rng = random.Random(6201)
        for _ in range(80):
            d = 2 if rng.random() < 0.8 else 3
            X = random_instance(rng, d, n_max=20 if d == 2 else 12)
            cone = random_cone_mix(rng, d)
            rep = check_max_rank_maximality(X, cone)
            assert rep.max_rank_all_maximal

        before = fixtures.concave_front(False)
        ranks0 = [rank_cone(before, ORTH, p.coords).value for p in before.points]
        after = fixtures.concave_front(True)
        rep = check_max_rank_maximality(after, ORTH)
        ranks1 = [rep.ranks[i] for i in ("A", "B", "C")]
        ok = (
            ranks0 == [1, 1, 1]
            and ranks1 == [1, 4, 1]
            and rep.max_rank_ids == ("B",)
            and set(rep.converse_witnesses) == {"A", "C"}
        )
        _report(
            "maximality-theorem",
            ok,
            f"randomized instances pass; fixture ranks {ranks0} -> {ranks1}, converse witnesses {sorted(rep.converse_witnesses)}",
        )


class TestReversalResults:
    def test_spread_reversal_fixture(self):
        rep = detect_reversals(fixtures.reversal_base(), fixtures.REVERSAL_ADDITIONS, ORTH)
        strict = [p for p in rep.pairs if p.kind == "strict"]
        ok = (
            rep.ranks_before["x"] == 1
            and rep.ranks_after["x"] == 6
            and rep.ranks_before["y"] == 2
            and rep.ranks_after["y"] == 2
            and any(p.x_id == "x" and p.y_id == "y" for p in strict)
        )
        _report("spread-reversal-fixture", ok, "x: 1 -> 6, y: 2 -> 2, strict pair reported")

    def test_single_addition_bound(self):
        rng = random.Random(7077)
        trials = 0
        for _ in range(1000):
            X = random_instance(rng, 2, n_max=6)
            cone = random_cone_mix(rng, 2)
            z = tuple(rng.randint(-30, 30) for _ in range(2))
            rep = detect_reversals(X, [z], cone)
            for i in X.ids:
                assert rep.ranks_after[i] - rep.ranks_before[i] in (0, 1)
            trials += 1
        _report("single-addition-bound", trials == 1000, f"{trials} single-addition trials, deltas in {{0,1}}")

    def test_two_point_cases(self):
        anti = AlternativeSet.from_rows(fixtures.TWO_POINT_ANTICHAIN)
        chain = AlternativeSet.from_rows(fixtures.TWO_POINT_CHAIN)
        case1 = [rank_cone(anti, ORTH, p.coords).value for p in anti.points]
        case2 = [rank_cone(chain, ORTH, p.coords).value for p in chain.points]
        _report(
            "two-point-cases",
            case1 == [1, 1] and case2 == [1, 2],
            f"case 1 ranks {case1}, case 2 ranks {case2}",
        )


class TestSetRankingCriteria:
    def test_picture_values(self):
        X = fixtures.set_picture()
        rn = [set_rank([i for i in X.ids if i != d], X, ORTH).value for d in X.ids]
        cx = [indicator_cx([i for i in X.ids if i != d], X, ORTH).value for d in X.ids]
        _report(
            "set-picture-values",
            rn == [2, 1, 2] and cx == [2, 2, 2],
            f"set ranks {rn}, indicator {cx}",
        )

    def test_strict_refinement_inequality(self):
        rng = random.Random(8088)
        done = 0
        while done < 1000:
            d = 2 if rng.random() < 0.8 else 3
            X = random_instance(rng, d, n_max=9)
            cone = random_cone_mix(rng, d)
            ids = list(X.ids)
            b = rng.sample(ids, rng.randint(1, len(ids) - 1))
            candidates = [
                i
                for i in ids
                if i not in b
                and not any(
                    leq_cone(cone, X.vector(i), X.vector(j)) for j in b
                )
            ]
            if not candidates:
                continue
            a = b + [rng.choice(candidates)]
            assert set_dominates(a, b, X, cone)
            assert not set_dominates(b, a, X, cone)
            assert indicator_cx(a, X, cone).value >= indicator_cx(b, X, cone).value + 1
            done += 1
        _report("strict-refinement", done == 1000, f"{done} strict set-domination pairs")

    def test_setrank_counterexample_equality(self):
        X = fixtures.set_picture()
        a = ["x1", "x2", "x3"]
        b = ["x2", "x3"]
        ok = (
            set_dominates(a, b, X, ORTH)
            and not set_dominates(b, a, X, ORTH)
            and set_rank(a, X, ORTH).value == set_rank(b, X, ORTH).value == 2
        )
        _report("setrank-counterexample", ok, "strict set domination, equal set ranks (2, 2)")


class TestClassificationCriteria:
    def test_level_set_nesting(self):
        rng = random.Random(9009)
        checks = 0
        for _ in range(25):
            d = 2 if rng.random() < 0.8 else 3
            X = random_instance(rng, d, n_max=8)
            cone = random_cone_mix(rng, d)
            probes = [tuple(rng.randint(-30, 30) for _ in range(d)) for _ in range(5)]
            values = {z: rank_cone(X, cone, z).value for z in probes}
            for n in range(0, X.size + 1):
                for z in probes:
                    if level_member(LevelSetQuery(X, cone, n + 1), z):
                        assert level_member(LevelSetQuery(X, cone, n), z)
                        checks += 1
            # membership consistent with the rank values
            for z, v in values.items():
                assert level_member(LevelSetQuery(X, cone, v), z)
                assert not level_member(LevelSetQuery(X, cone, v + 1), z)
        _report("level-set-nesting", True, f"{checks} nesting checks")

    def test_fit_threshold_is_scan_optimum(self):
        rng = random.Random(9119)
        for _ in range(25):
            d = 2 if rng.random() < 0.8 else 3
            X = random_instance(rng, d, n_max=9)
            cone = random_cone_mix(rng, d)
            labels = {
                p.id: ("acceptable" if rng.random() < 0.5 else "unacceptable")
                for p in X.points
                if rng.random() < 0.8
            }
            if not labels:
                continue
            model = fit_threshold(LabeledSet(X, labels), cone)
            # independent re-count through the level-set membership API
            best = None
            for n in range(0, X.size + 2):
                q = LevelSetQuery(X, cone, n)
                errs = sum(
                    1
                    for i, lab in labels.items()
                    if level_member(q, X.vector(i)) != (lab == "acceptable")
                )
                best = errs if best is None else min(best, errs)
            assert model.error_rate == Fraction(best, len(labels))
        _report("fit-threshold-optimum", True, "25 instances, scan matches independent recount")

    def test_alignment_never_increases_error(self):
        rng = random.Random(9229)
        wins = 0
        for _ in range(100):
            L = separable_cohort(rng)
            before = fit_threshold(L, ORTH)
            rotated = align_cone_svm(L, ORTH)
            after = fit_threshold(L, rotated)
            if after.error_rate <= before.error_rate:
                wins += 1
        _report("svm-alignment", wins == 100, f"{wins}/100 trials aligned error <= unaligned")


class TestCliServiceParity:
    def test_twenty_golden_requests(self, tmp_path):
        store_dir = tmp_path / "store"
        store = Store(store_dir)
        client = TestClient(create_app(store))
        runner = CliRunner()

        chain4 = fixtures.as_csv([(c, (str(k), str(k))) for k, c in enumerate("abcd")])
        picture = fixtures.as_csv(fixtures.SET_PICTURE)
        reversal_csv = fixtures.as_csv(fixtures.REVERSAL_BASE)
        concave = fixtures.as_csv(fixtures.CONCAVE_FRONT_BASE + fixtures.CONCAVE_FRONT_EXTRA)
        labeled = "id,c1,c2,label\n" + "".join(
            f"g{k},{30 + k},{32 + k},1\n" for k in range(4)
        ) + "".join(f"b{k},{k},{k + 1},0\n" for k in range(4))

        ids = {}
        for name, text in [
            ("chain4", chain4),
            ("picture", picture),
            ("reversal", reversal_csv),
            ("concave", concave),
            ("labeled", labeled),
        ]:
            ids[name] = store.ingest_csv(text).dataset_id

        orthant = {"rays": [[1, 0], [0, 1]]}
        wb = {"weight_bounds": {"min": [0.7, 0], "max": [0.8, 1]}}
        wide = {"dual_rays": [[2, 1], [1, 3]]}
        sets_spec = {"A1": ["x2", "x3"], "A2": ["x1", "x3"], "A3": ["x1", "x2"]}
        adds = [list(a) for a in fixtures.REVERSAL_ADDITIONS]

        cone_files = {}
        for name, cfg in [("orthant", orthant), ("wb", wb), ("wide", wide)]:
            p = tmp_path / f"{name}.json"
            p.write_text(json.dumps(cfg))
            cone_files[name] = str(p)
        sets_file = tmp_path / "sets.json"
        sets_file.write_text(json.dumps({"sets": sets_spec}))
        add_file = tmp_path / "adds.json"
        add_file.write_text(json.dumps(adds))

        def cli_bytes(args):
            res = runner.invoke(cli_main, args + ["--store", str(store_dir)])
            assert res.exit_code == 0, res.output
            return res.stdout_bytes

        def http_bytes(path, body):
            r = client.post(path, json=body)
            assert r.status_code == 200, r.content
            return r.content

        goldens = []
        for ds in ("chain4", "picture", "reversal", "concave", "labeled"):
            for cone_name in ("orthant", "wb", "wide"):
                goldens.append(
                    (
                        ["rank", "--dataset", ids[ds], "--cone", cone_files[cone_name]],
                        "/rank",
                        {"dataset": ids[ds], "cone": {"orthant": orthant, "wb": wb, "wide": wide}[cone_name]},
                    )
                )
        goldens.append(
            (
                ["setrank", "--dataset", ids["picture"], "--cone", cone_files["orthant"], "--sets", str(sets_file)],
                "/setrank",
                {"dataset": ids["picture"], "cone": orthant, "sets": sets_spec},
            )
        )
        goldens.append(
            (
                ["reversal", "--dataset", ids["reversal"], "--cone", cone_files["orthant"], "--add", str(add_file)],
                "/whatif",
                {"dataset": ids["reversal"], "cone": orthant, "add": adds},
            )
        )
        goldens.append(
            (
                ["classify", "--dataset", ids["labeled"], "--cone", cone_files["orthant"], "--alpha", "50.0"],
                "/classify",
                {"dataset": ids["labeled"], "cone": orthant, "alpha": 50.0},
            )
        )
        goldens.append(
            (
                ["align", "--dataset", ids["labeled"], "--cone", cone_files["orthant"]],
                "/align",
                {"dataset": ids["labeled"], "cone": orthant},
            )
        )
        goldens.append(
            (
                ["compare", "--dataset", ids["chain4"], "--cone", cone_files["orthant"], "--weights", "0.5,0.5"],
                "/compare",
                {"dataset": ids["chain4"], "cone": orthant, "weights": [0.5, 0.5]},
            )
        )
        assert len(goldens) == 20

        identical = 0
        for args, path, body in goldens:
            if cli_bytes(args) == http_bytes(path, body):
                identical += 1
        _report("cli-service-parity", identical == 20, f"{identical}/20 golden requests byte-identical")
