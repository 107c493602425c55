"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines as they complete.  Tolerances are pinned here and nowhere else.
"""

from __future__ import annotations

import math
import time

import pytest

from schedtest.adversaries import (
    AdaptiveAdversary,
    FamilySpec,
    make_family,
    random_instance,
    smallest_ratio_first,
)
from schedtest.algorithms import (
    algorithmic_runtimes,
    alpha_beta_sort,
    force_testing,
    golden_round_robin,
    makespan_deterministic,
    makespan_randomized,
    processor_sharing_completions,
    randomized_sort,
    sort_test_probability,
)
from schedtest.analysis import (
    RECOMMENDED_TEST_BETA,
    AUDIT_CASES,
    contribution_audit,
    makespan_randomized_bound,
    makespan_randomized_expected_ratio,
    minimize_f_grid,
    monte_carlo,
    optimize_beta,
)
from schedtest.bruteforce import brute_opt_sum, brute_opt_sum_all_orders
from schedtest.core import (
    GOLDEN_RATIO,
    Job,
    StaticOracle,
    opt_sum_completion,
    outcome_from_schedule,
)

from conftest import mixed_battery, run_outcome, unit_test_variant

PHI = GOLDEN_RATIO
TOL = 1e-9


def _criterion(num, ok: bool, detail: str) -> None:
    print(f"[criterion {num:>3}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num}: {detail}"


@pytest.fixture(scope="module")
def big_battery():
    return mixed_battery(10_000, 50, seed_tag=500)


@pytest.fixture(scope="module")
def small_battery():
    return mixed_battery(1_000, 8, seed_tag=501)


@pytest.fixture(scope="module")
def medium_battery():
    return mixed_battery(1_000, 30, seed_tag=502)


def test_c01_parameter_optimum_of_closed_form_bound():
    start = time.perf_counter()
    alpha, beta, value = minimize_f_grid()
    elapsed = time.perf_counter() - start
    ok = (alpha, beta) == (1.0, 1.0) and value == 4.0 and elapsed < 5.0
    _criterion(1, ok, f"grid min f({alpha:g},{beta:g}) = {value} in {elapsed:.2f}s")


def test_c02_randomized_analysis_constants():
    start = time.perf_counter()
    res = optimize_beta()
    elapsed = time.perf_counter() - start
    checks = {
        "beta_star": (res.beta_star, 1.2574),
        "worst_ratio": (res.worst_ratio, 3.3794),
        "r_star": (res.r_star, 1.4386),
        "r_hat": (res.r_hat, 2.1637),
        "capped_region_max": (res.capped_region_max, 3.2574),
    }
    bad = {k: got for k, (got, want) in checks.items() if abs(got - want) > 1e-3}
    ok = not bad and elapsed < 30.0
    _criterion(
        2,
        ok,
        f"beta*={res.beta_star:.6f} worst={res.worst_ratio:.6f} r*={res.r_star:.6f} "
        f"r_hat={res.r_hat:.6f} capped={res.capped_region_max:.6f} in {elapsed:.1f}s"
        + (f"; out of tolerance: {bad}" if bad else ""),
    )


def test_c03_deterministic_sort_lower_bound_convergence():
    worst_rel = 0.0
    for n in (10, 100, 1000):
        eps = 0.01
        jobs = make_family(FamilySpec("lb3", n=n, eps=eps))
        out, _, _ = run_outcome(lambda o: alpha_beta_sort(o, 1.0, 1.0), jobs)
        expected = n * n * (1 - eps) + n * n / 2 + n / 2
        worst_rel = max(worst_rel, abs(out.sum_completion - expected) / expected)
    jobs = make_family(FamilySpec("lb3", n=10_000, eps=1e-4))
    out, _, _ = run_outcome(lambda o: alpha_beta_sort(o, 1.0, 1.0), jobs)
    ok = worst_rel <= 1e-6 and abs(out.ratio_sum - 3.0) <= 0.01
    _criterion(3, ok, f"value rel err {worst_rel:.2e}; ratio(n=1e4) = {out.ratio_sum:.4f}")


def test_c04_sharing_scheduler_tightness():
    worst_rel = 0.0
    for n in (10, 100, 1000):
        jobs = make_family(FamilySpec("grr-tight", n=n))
        out, _, _ = run_outcome(golden_round_robin, jobs)
        expected = n * n * PHI
        worst_rel = max(worst_rel, abs(out.sum_completion - expected) / expected)
    jobs = make_family(FamilySpec("grr-tight", n=10_000))
    out, _, _ = run_outcome(golden_round_robin, jobs)
    ok = worst_rel <= 1e-6 and abs(out.ratio_sum - 2 * PHI) <= 0.01
    _criterion(4, ok, f"value rel err {worst_rel:.2e}; ratio(n=1e4) = {out.ratio_sum:.4f}")


def test_c05_upper_bound_property_suite(big_battery):
    start = time.perf_counter()
    violations = 0
    checked = 0
    for jobs in big_battery:
        for builder, bound, objective, inst in (
            (lambda o: alpha_beta_sort(o, 1.0, 1.0), 4.0, "sum", jobs),
            (golden_round_robin, 2 * PHI, "sum", jobs),
            (makespan_deterministic, PHI, "makespan", jobs),
            (force_testing, 2.0, "sum", unit_test_variant(jobs)),
        ):
            out, _, _ = run_outcome(builder, inst)
            ratio = out.ratio_sum if objective == "sum" else out.ratio_makespan
            checked += 1
            if not (1.0 - TOL <= ratio <= bound + TOL):
                violations += 1
    elapsed = time.perf_counter() - start
    ok = violations == 0 and elapsed < 120.0
    _criterion(5, ok, f"{checked} runs on {len(big_battery)} instances, "
                      f"{violations} violations, {elapsed:.0f}s")


def test_c06_randomized_sort_empirical_guarantee():
    beta = RECOMMENDED_TEST_BETA
    trials = 1000
    batteries: list[tuple[str, list[Job]]] = [
        ("lb3", make_family(FamilySpec("lb3", n=50, eps=0.01))),
        ("high-alpha", make_family(FamilySpec("high-alpha"))),
        ("high-beta", make_family(FamilySpec("high-beta", n=50))),
        ("two-sets", make_family(FamilySpec("two-sets", n=25, m=25, beta=2.0, eps=0.01))),
        ("ratio-trap", make_family(FamilySpec("ratio-trap", m=10, lam=2.0, eps=1e-3))),
        ("grr-tight", make_family(FamilySpec("grr-tight", n=50))),
        ("force-test-tight", make_family(FamilySpec("force-test-tight", n=50))),
        ("makespan-rand-lb", make_family(FamilySpec("makespan-rand-lb"))),
        ("random-uniform", random_instance(30, 10.0, (601, 0), "uniform")),
        ("random-heavy", random_instance(30, 10.0, (601, 1), "heavy_ratio")),
        ("random-near", random_instance(30, 10.0, (601, 2), "near_threshold")),
    ]
    worst = ("", -math.inf, 0.0)
    for label, jobs in batteries:
        stats = monte_carlo(
            lambda o, s: randomized_sort(o, beta, lambda r: sort_test_probability(r, beta), s),
            lambda i: StaticOracle(jobs),
            trials=trials,
            base_seed=602,
        )
        limit = 3.3794 + 3.0 * stats.std / math.sqrt(trials)
        if stats.mean > limit:
            _criterion(6, False, f"{label}: mean {stats.mean:.4f} above {limit:.4f}")
        if stats.minimum < 1.0 - TOL:
            _criterion(6, False, f"{label}: ratio {stats.minimum} below 1")
        if stats.mean > worst[1]:
            worst = (label, stats.mean, limit)
    _criterion(6, True, f"worst family {worst[0]}: mean {worst[1]:.4f} <= {worst[2]:.4f}")


def test_c07_randomized_makespan_guarantee():
    for r in (1.0, 1.5, 2.0, 3.0, 10.0):
        bound = makespan_randomized_bound(r)
        for response in ("zero", "full"):
            got = makespan_randomized_expected_ratio(r, response)
            if abs(got - bound) > TOL:
                _criterion(7, False, f"r={r} {response}: {got} != {bound}")
    for response in ("zero", "full"):
        got = makespan_randomized_expected_ratio(2.0, response)
        if abs(got - 4.0 / 3.0) > TOL:
            _criterion(7, False, f"u=2,t=1 response {response}: {got} != 4/3")
    jobs = make_family(FamilySpec("makespan-rand-lb"))
    stats = monte_carlo(
        makespan_randomized,
        lambda i: StaticOracle(jobs),
        trials=10_000,
        base_seed=12345,
        objective="makespan",
    )
    ok = stats.ci_low <= 4.0 / 3.0 <= stats.ci_high and stats.minimum >= 1.0 - TOL
    _criterion(
        7, ok, f"analytic = bound at all probes; MC mean {stats.mean:.4f}, "
               f"CI [{stats.ci_low:.4f}, {stats.ci_high:.4f}] covers 4/3"
    )


def test_c08_oracle_equivalence(small_battery):
    worst = 0.0
    for jobs in small_battery:
        got = opt_sum_completion(jobs)
        want = brute_opt_sum(jobs).best_value
        worst = max(worst, abs(got - want) / max(want, 1.0))
        if abs(got - want) > max(TOL, 1e-9 * want):
            _criterion(8, False, f"closed form {got} != enumeration {want}")
    perm_checked = 0
    for i in range(300):
        jobs = random_instance(1 + i % 5, 10.0, (503, i), "uniform")
        want = brute_opt_sum_all_orders(jobs)
        got = brute_opt_sum(jobs).best_value
        perm_checked += 1
        if abs(got - want) > max(TOL, 1e-9 * want):
            _criterion(8, False, f"permutation enumeration disagrees: {got} vs {want}")
    _criterion(8, True, f"{len(small_battery)} decision checks (worst rel {worst:.1e}), "
                        f"{perm_checked} permutation checks")


def test_c09_processor_sharing_fidelity(medium_battery):
    worst = 0.0
    for jobs in medium_battery:
        out, oracle, _ = run_outcome(golden_round_robin, jobs)
        works = algorithmic_runtimes(oracle)
        ids = sorted(works)
        expected = processor_sharing_completions([works[j] for j in ids])
        for job_id, want in zip(ids, expected):
            err = abs(out.completion[job_id] - want)
            worst = max(worst, err)
            if err > TOL:
                _criterion(9, False, f"job {job_id}: simulated {out.completion[job_id]} vs {want}")
    _criterion(9, True, f"{len(medium_battery)} instances, worst |diff| {worst:.1e}")


def _coverage_instances() -> list[list[Job]]:
    # Two crafted instances that jointly exercise every classification case
    # at (alpha, beta) = (1, 1): untested targets need u < t.
    untested_targets = [
        Job(0, 1.0, 2.0, 0.5),
        Job(1, 2.0, 3.0, 1.0),
        Job(2, 3.0, 0.5, 0.4),
        Job(3, 5.0, 0.5, 4.0),
        Job(4, 9.0, 8.0, 1.0),
    ]
    tested_targets = [
        Job(0, 4.0, 3.0, 2.0),
        Job(1, 2.5, 3.0, 1.0),
        Job(2, 2.0, 1.0, 1.5),
        Job(3, 9.0, 2.0, 8.0),
        Job(4, 12.0, 1.0, 10.0),
        Job(5, 6.0, 2.0, 5.0),
        Job(6, 20.0, 2.0, 19.0),
        Job(7, 15.0, 12.0, 0.0),
        Job(8, 2.0, 3.0, 1.8),
        Job(9, 11.0, 12.0, 0.0),
    ]
    return [untested_targets, tested_targets]


def test_c10_contribution_audit(medium_battery):
    counts = {label: 0 for label in AUDIT_CASES}
    audited = 0
    for jobs in _coverage_instances() + [make_family(FamilySpec("lb3", n=3, eps=0.5))] + medium_battery:
        oracle = StaticOracle(jobs)
        events = alpha_beta_sort(oracle, 1.0, 1.0)
        report = contribution_audit(events, oracle, 1.0, 1.0)
        audited += 1
        for label, c in report.case_counts.items():
            counts[label] += c
    missing = [label for label, c in counts.items() if c == 0]
    ok = not missing
    _criterion(10, ok, f"{audited} schedules audited; all ratio cases hit"
                       + (f"; missing {missing}" if missing else ""))


def test_c11_ratio_trap_unboundedness():
    ratios = {}
    for m in (100, 200):
        jobs = make_family(FamilySpec("ratio-trap", m=m, lam=2.0, eps=1e-6))
        bad, _, _ = run_outcome(smallest_ratio_first, jobs)
        good, _, _ = run_outcome(lambda o: alpha_beta_sort(o, 1.0, 1.0), jobs)
        ratios[m] = (bad.ratio_sum, good.ratio_sum)
        if good.ratio_sum > 4.0 + TOL:
            _criterion(11, False, f"bounded scheduler broke its bound at m={m}")
    ok = ratios[200][0] > ratios[100][0]
    _criterion(
        11, ok,
        f"trap policy ratio {ratios[100][0]:.1f} -> {ratios[200][0]:.1f}; "
        f"sort stays at {max(r for _, r in ratios.values()):.2f} <= 4",
    )


def test_c12_adaptive_adversary_sanity_floor():
    n, delta = 100, 0.6
    u_bars = (1.2, 1.4, 1.6, 1.8, 2.0, 2.5, 3.0, 4.0)
    floors = {}

    def best_ratio(run, objective: str, trials: int = 1) -> float:
        best = 0.0
        for u_bar in u_bars:
            if trials == 1:
                adv = AdaptiveAdversary(n, u_bar=u_bar, delta=delta)
                out = outcome_from_schedule(run(adv, 0), adv)
                ratio = out.ratio_sum if objective == "sum" else out.ratio_makespan
            else:
                stats = monte_carlo(
                    run,
                    lambda i, u=u_bar: AdaptiveAdversary(n, u_bar=u, delta=delta),
                    trials=trials,
                    base_seed=606,
                    objective=objective,
                )
                ratio = stats.mean
            best = max(best, ratio)
        return best

    floors["ab-sort"] = best_ratio(lambda o, s: alpha_beta_sort(o, 1.0, 1.0), "sum")
    floors["grr"] = best_ratio(lambda o, s: golden_round_robin(o), "sum")
    floors["force-test"] = best_ratio(lambda o, s: force_testing(o), "sum")
    floors["makespan-det"] = best_ratio(lambda o, s: makespan_deterministic(o), "makespan")
    beta = RECOMMENDED_TEST_BETA
    floors["rand-sort"] = best_ratio(
        lambda o, s: randomized_sort(o, beta, lambda r: sort_test_probability(r, beta), s),
        "sum",
        trials=64,
    )
    floors["makespan-rand"] = best_ratio(makespan_randomized, "makespan", trials=200)
    bad = {k: v for k, v in floors.items() if v < 1.5}
    ok = not bad
    summary = ", ".join(f"{k}={v:.2f}" for k, v in floors.items())
    _criterion(12, ok, f"adaptive-instance ratios: {summary}")
