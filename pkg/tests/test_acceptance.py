"""Acceptance criteria.  Each test records one PASS/FAIL line, printed in the
terminal summary under "acceptance criteria"."""

from __future__ import annotations

import json
import math
import random
import statistics
import time
from fractions import Fraction

import pytest

from lastsuccess import (
    brute_force_optimal,
    certify,
    classic_odds,
    evaluate_stop_set,
    odds_index,
    odds_value,
    path_enumeration_value,
    sign_changes,
    simulate,
    solve,
    sufficient_condition,
    validate,
)
from lastsuccess.cli import main
from lastsuccess.families import (
    FamilySpec,
    asymptotic_report,
    closed_form_threshold,
    closed_form_value,
    instantiate,
    rumor_constant,
    rumor_constant_lambert,
)
from lastsuccess.monotonicity import ebar_keep_table

from conftest import ACCEPTANCE_LINES, EXAMPLE_P, EXAMPLE_W, corpus, random_fraction_instance

EXAMPLE_VALUE = Fraction(6721, 2000)
EXAMPLE_SET = (4, 5, 7, 8, 9)

MONOTONICITY_CORPUS = corpus(seed=2024, count=500)


def record(criterion: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_1_worked_example(capsys):
    inst = validate(EXAMPLE_P, EXAMPLE_W)
    sol = solve(inst)
    exact_ok = sol.expected_profit == EXAMPLE_VALUE and sol.stopping_set == EXAMPLE_SET

    finst = inst.with_mode("float")
    fsol = solve(finst)
    float_ok = abs(fsol.expected_profit - float(EXAMPLE_VALUE)) <= 1e-12 and fsol.stopping_set == EXAMPLE_SET

    timings = []
    for _ in range(5):
        t0 = time.perf_counter()
        solve(validate(EXAMPLE_P, EXAMPLE_W))
        timings.append(time.perf_counter() - t0)
    runtime = statistics.median(timings)

    main(["solve", "--p", ",".join(EXAMPLE_P), "--w", ",".join(map(str, EXAMPLE_W)),
          "--mode", "exact", "--format", "json"])
    doc = json.loads(capsys.readouterr().out)
    cli_ok = doc["results"]["expected_profit"] == "6721/2000" and doc["results"]["stopping_set"] == list(EXAMPLE_SET)

    record(
        "1 worked example",
        exact_ok and float_ok and cli_ok and runtime < 0.010,
        f"exact={sol.expected_profit} set={sol.stopping_set} float_err="
        f"{abs(fsol.expected_profit - 3.3605):.1e} cli={cli_ok} runtime={runtime * 1e3:.2f}ms",
    )


def test_2_oracle_equivalence():
    t0 = time.perf_counter()
    instances = corpus(seed=7, count=200)
    rng = random.Random(8)
    dp_mismatch = attain_mismatch = path_mismatch = path_checks = 0
    for inst in instances:
        sol = solve(inst)
        best = brute_force_optimal(inst)
        dp_mismatch += best.value != sol.expected_profit
        attain_mismatch += evaluate_stop_set(inst, sol.stopping_set) != best.value
        if inst.n <= 10:
            sets = [sol.stopping_set, best.set]
            sets += [[k for k in range(1, inst.n + 1) if rng.random() < 0.5] for _ in range(3)]
            for members in sets:
                path_checks += 1
                path_mismatch += evaluate_stop_set(inst, members) != path_enumeration_value(inst, members)
    elapsed = time.perf_counter() - t0
    record(
        "2 oracle equivalence",
        dp_mismatch == attain_mismatch == path_mismatch == 0 and elapsed < 60,
        f"200 instances: dp!=brute {dp_mismatch}, dp set not attaining {attain_mismatch}; "
        f"closed form vs path oracle {path_mismatch}/{path_checks} mismatches; {elapsed:.1f}s",
    )


def test_3_classic_odds_reduction():
    rng = random.Random(3)
    instances = []
    while len(instances) < 200:
        inst = random_fraction_instance(rng, unit_payoffs=True)
        if all(p < 1 for p in inst.p):
            instances.append(inst)
    index_bad = value_bad = dp_bad = monotone = 0
    for inst in instances:
        for mode_inst in (inst, inst.with_mode("float")):
            classic = classic_odds(mode_inst.p)
            s = odds_index(mode_inst)
            index_bad += s != classic.s
            value_bad += abs(float(odds_value(mode_inst, s)) - float(classic.value)) > 1e-12
        sol = solve(inst)
        if certify(inst, sol).monotone:
            monotone += 1
            dp_bad += abs(float(odds_value(inst, odds_index(inst)) - sol.expected_profit)) > 1e-12
    record(
        "3 classic odds reduction",
        index_bad == value_bad == dp_bad == 0,
        f"200 instances x 2 modes: index mismatches {index_bad}, value mismatches {value_bad}; "
        f"{monotone} monotone, dp mismatches {dp_bad}",
    )


def test_4a_sufficient_condition_implies_suffix():
    hits = violations = 0
    for inst in MONOTONICITY_CORPUS:
        if sufficient_condition(inst):
            hits += 1
            violations += not solve(inst).is_suffix()
    record("4a payoff condition => suffix", violations == 0,
           f"{hits}/500 satisfy the condition, {violations} non-suffix")


def test_4b_sign_changes_iff_suffix():
    only_if_fail = if_fail = 0
    first = None
    for inst in MONOTONICITY_CORPUS:
        single = sign_changes(inst) <= 1
        suffix = solve(inst).is_suffix()
        if single and not suffix:
            if_fail += 1
        if suffix and not single:
            only_if_fail += 1
            first = first or inst
    detail = (
        f"<=1 sign change but not suffix: {if_fail}; suffix but >=2 sign changes: {only_if_fail}"
    )
    if first is not None:
        detail += f" (e.g. p={[str(x) for x in first.p]}, w={[str(x) for x in first.w]})"
    record("4b sign changes <= 1 <=> suffix", if_fail == 0 and only_if_fail == 0, detail)


def test_4c_example_not_monotone():
    inst = validate(EXAMPLE_P, EXAMPLE_W)
    verdict = certify(inst, solve(inst))
    record("4c example certified NotMonotone", not verdict.monotone and verdict.witness == (6, 7),
           f"monotone={verdict.monotone} certificate={verdict.certificate.value} witness={verdict.witness}")


def test_4d_piecewise_value_identity():
    checked = bad = 0
    for inst in MONOTONICITY_CORPUS:
        sol = solve(inst)
        if not sol.is_suffix():
            continue
        checked += 1
        k_star = sol.threshold
        ebar = ebar_keep_table(inst)
        bad += any(
            sol.e_keep[r] != (ebar[r] if r >= k_star else ebar[k_star - 1])
            for r in range(inst.n + 1)
        )
    record("4d e_keep/ebar_keep piecewise identity", bad == 0,
           f"{checked} monotone instances, {bad} violations (exact)")


PROBS = [Fraction(k, 10) for k in range(1, 10)]


def _all_family_specs():
    for n in range(2, 301):
        yield FamilySpec.duration(n)
        yield FamilySpec.minimal_duration(n)
        yield FamilySpec.uniform_small_p(n)
        for p in PROBS:
            yield FamilySpec.constant_p(n, p)


def test_5a_closed_form_thresholds():
    checked = bad = 0
    for spec in _all_family_specs():
        checked += 1
        bad += closed_form_threshold(spec) != odds_index(instantiate(spec))
    record("5a closed-form thresholds = odds index", bad == 0,
           f"{checked} (family, n, p) cases, {bad} mismatches")


def test_5b_constant_p_value():
    worst = 0.0
    for n in range(2, 301):
        for p in PROBS:
            spec = FamilySpec.constant_p(n, p)
            dp = solve(instantiate(spec, "float")).expected_profit
            closed = float(closed_form_value(spec))
            worst = max(worst, abs(closed - dp) / abs(dp))
    record("5b constant-p closed-form value = dp", worst <= 1e-9, f"max relative error {worst:.2e}")


def test_5c_constant_p_threshold_bound():
    checked = 0
    failures: dict[str, int] = {}
    for n in range(2, 301):
        for p in PROBS:
            if not n > 2 * (1 - p) / p:
                continue
            checked += 1
            s = odds_index(instantiate(FamilySpec.constant_p(n, p)))
            if not s < n - math.ceil(1 / p) + 2:
                failures[str(p)] = failures.get(str(p), 0) + 1
    record("5c threshold bound s < n - ceil(1/p) + 2", not failures,
           f"{checked} cases, failures by p: {failures or 'none'}")


def test_6_asymptotic_constants():
    t0 = time.perf_counter()
    grid = [10**3, 10**4, 10**5]
    theta = 0.203187869
    checks = {
        "duration s/n": ("duration", "s_ratio", theta),
        "minimal-duration s/n": ("minimal-duration", "s_ratio", 0.5),
        "minimal-duration E/n": ("minimal-duration", "value_ratio", 0.25),
        "uniform-small-p s/n": ("uniform-small-p", "s_ratio", math.sqrt(2) - 1),
        "uniform-small-p E/n": ("uniform-small-p", "value_ratio", 0.230579),
    }
    reports = {name: asymptotic_report(name, grid) for name in {c[0] for c in checks.values()}}
    ok, parts = True, []
    for label, (family, attr, target) in checks.items():
        errors = [abs(getattr(row, attr) - target) for row in reports[family]]
        good = errors[-1] <= 5e-3 and errors[0] > errors[1] > errors[2]
        ok &= good
        parts.append(f"{label} err@1e5={errors[-1]:.1e}{'' if good else ' (FAIL)'}")
    elapsed = time.perf_counter() - t0
    record("6 asymptotic constants", ok and elapsed < 30, "; ".join(parts) + f"; {elapsed:.1f}s")


def test_7_rumor_constant():
    theta = rumor_constant()
    residual = abs(2 - 2 * theta + math.log(theta))
    lambert_gap = abs(theta - rumor_constant_lambert())
    digits = repr(theta)[:11]
    record(
        "7 rumour's constant",
        residual <= 1e-10 and digits == "0.203187869" and lambert_gap <= 1e-9,
        f"theta={theta!r} residual={residual:.1e} lambert gap={lambert_gap:.1e}",
    )


def test_8_monte_carlo():
    inst = validate(EXAMPLE_P, EXAMPLE_W)
    exact = float(EXAMPLE_VALUE)
    outside = rerun_diff = worker_diff = 0
    zs = []
    for seed in range(20):
        base = simulate(inst, EXAMPLE_SET, 10**6, seed)
        zs.append((base.mean - exact) / base.stderr)
        outside += abs(base.mean - exact) > 4 * base.stderr
        rerun_diff += simulate(inst, EXAMPLE_SET, 10**6, seed) != base
        for workers in (2, 8):
            worker_diff += simulate(inst, EXAMPLE_SET, 10**6, seed, workers=workers) != base
    record(
        "8 Monte Carlo",
        outside <= 1 and rerun_diff == 0 and worker_diff == 0,
        f"20 seeds: {outside} beyond 4 stderr (max |z|={max(map(abs, zs)):.2f}); "
        f"rerun diffs {rerun_diff}; worker (1/2/8) diffs {worker_diff}",
    )


def test_9_scaling_invariance():
    c = Fraction(7, 3)
    bad = 0
    for inst in corpus(seed=99, count=100):
        scaled = inst.scaled(c)
        a, b = solve(inst), solve(scaled)
        s_a, s_b = odds_index(inst), odds_index(scaled)
        bad += (
            a.stopping_set != b.stopping_set
            or s_a != s_b
            or b.expected_profit != c * a.expected_profit
            or b.e_keep != tuple(c * x for x in a.e_keep)
            or b.e_stop != tuple(c * x for x in a.e_stop)
            or odds_value(scaled, s_b) != c * odds_value(inst, s_a)
        )
    record("9 scaling invariance", bad == 0, f"100 instances x 7/3, {bad} violations")


@pytest.fixture(autouse=True, scope="module")
def _header():
    ACCEPTANCE_LINES.clear()
    yield
