"""Instance families, the adaptive adversary, and random generators."""

from __future__ import annotations


import pytest

from schedtest.adversaries import (
    AdaptiveAdversary,
    FamilyError,
    FamilySpec,
    make_family,
    random_instance,
    smallest_ratio_first,
)
from schedtest.algorithms import alpha_beta_sort, golden_round_robin
from schedtest.core import GOLDEN_RATIO, Job, ProtocolError, StaticOracle, outcome_from_schedule

from conftest import run_outcome

PHI = GOLDEN_RATIO


def as_tuples(jobs):
    return [(j.u, j.t, j.p) for j in jobs]


class TestFamilies:
    def test_lb3_member(self):
        jobs = make_family(FamilySpec("lb3", n=2, eps=0.5))
        assert as_tuples(jobs) == [(1.0, 0.5, 1.0)] * 2

    def test_ratio_trap_member(self):
        jobs = make_family(FamilySpec("ratio-trap", m=2, lam=2.0, eps=0.1))
        assert as_tuples(jobs) == [(2.0, 1.0, 2.0), (2.0, 1.0, 2.0), (4.0, 2.1, 0.0)]

    def test_grr_tight_member(self):
        jobs = make_family(FamilySpec("grr-tight", n=1))
        assert as_tuples(jobs) == [(1.0, 1.0 / PHI, 1.0)]

    def test_high_alpha_member(self):
        assert as_tuples(make_family(FamilySpec("high-alpha"))) == [(2.0, 1.0, 0.0)]

    def test_high_beta_member(self):
        jobs = make_family(FamilySpec("high-beta", n=3))
        assert as_tuples(jobs) == [(2.0, 1.0, 2.0)] * 3

    def test_two_sets_member(self):
        jobs = make_family(FamilySpec("two-sets", n=2, m=2, beta=2.0, eps=0.01))
        big = 10.0 * 2.0 * 2 * 1.01
        assert as_tuples(jobs) == [(2.0, 0.99, 2.0)] * 2 + [(big, 1.01, 0.0)] * 2

    def test_makespan_families(self):
        assert as_tuples(make_family(FamilySpec("makespan-det-lb"))) == [(PHI, 1.0, PHI)]
        assert as_tuples(make_family(FamilySpec("makespan-rand-lb"))) == [(2.0, 1.0, 2.0)]

    def test_force_test_tight_member(self):
        jobs = make_family(FamilySpec("force-test-tight", n=3))
        assert all(j.u >= 2.0 and j.t == 1.0 and j.p == 0.0 for j in jobs)

    def test_unknown_family_rejected(self):
        with pytest.raises(FamilyError):
            FamilySpec("nope")

    def test_invalid_parameters_rejected(self):
        with pytest.raises(FamilyError):
            FamilySpec("lb3", n=0)
        with pytest.raises(FamilyError):
            FamilySpec("lb3", eps=0.0)
        with pytest.raises(FamilyError):
            make_family(FamilySpec("lb3", eps=1.5))

    def test_lb3_matches_closed_form_for_all_sizes(self):
        for eps in (0.5, 0.1, 0.01):
            for n in range(1, 101):
                jobs = make_family(FamilySpec("lb3", n=n, eps=eps))
                out, _, _ = run_outcome(lambda o: alpha_beta_sort(o, 1.0, 1.0), jobs)
                expected = n * n * (1 - eps) + n * n / 2 + n / 2
                assert out.sum_completion == pytest.approx(expected, abs=1e-9)

    def test_grr_tight_matches_closed_form(self):
        for n in (1, 2, 7, 40, 100):
            jobs = make_family(FamilySpec("grr-tight", n=n))
            out, _, _ = run_outcome(golden_round_robin, jobs)
            assert out.sum_completion == pytest.approx(n * n * PHI, rel=1e-12)

    def test_two_sets_ratio_approaches_closed_form(self):
        for beta, limit in ((2.0, 11 / 5), (3.0, 14 / 6)):
            ratios = []
            for n in (50, 200, 400):
                jobs = make_family(FamilySpec("two-sets", n=n, m=n, beta=beta, eps=1e-4))
                out, _, _ = run_outcome(lambda o, b=beta: alpha_beta_sort(o, 1.0, b), jobs)
                ratios.append(out.ratio_sum)
            assert ratios[0] < ratios[1] < ratios[2] < limit
            assert ratios[2] == pytest.approx(limit, abs=0.01)

    def test_high_alpha_punishes_large_alpha(self):
        jobs = make_family(FamilySpec("high-alpha"))
        out, _, _ = run_outcome(lambda o: alpha_beta_sort(o, 2.5, 1.0), jobs)
        assert out.ratio_sum == pytest.approx(2.0, abs=1e-12)

    def test_high_beta_ratio_approaches_two(self):
        jobs = make_family(FamilySpec("high-beta", n=500))
        out, _, _ = run_outcome(lambda o: alpha_beta_sort(o, 1.0, 1.0), jobs)
        # ALG = n^2 + 2(n^2/2 + n/2), OPT = 2(n^2/2 + n/2)
        n = 500
        assert out.sum_completion == pytest.approx(n * n + n * n + n, abs=1e-6)
        assert out.ratio_sum == pytest.approx(2.0, abs=0.01)


class TestAdaptiveAdversary:
    def test_first_tested_job_gets_full_bound(self):
        adv = AdaptiveAdversary(4, u_bar=3.0, delta=1.0)
        assert adv.test(0) == 3.0

    def test_untested_jobs_get_zero(self):
        adv = AdaptiveAdversary(4, u_bar=3.0, delta=1.0)
        adv.run_untested(1)
        adv.test(0)
        adv.run_untested(2)
        adv.test(3)
        by_id = {j.id: j.p for j in adv.realized()}
        assert by_id[1] == 0.0 and by_id[2] == 0.0
        assert by_id[0] == 3.0 and by_id[3] == 3.0

    def test_budget_exhausts_after_delta_fraction(self):
        adv = AdaptiveAdversary(10, u_bar=2.0, delta=0.5)
        values = [adv.test(j) for j in range(10)]
        assert values[:5] == [2.0] * 5
        assert values[5:] == [0.0] * 5

    def test_decisions_are_frozen(self):
        adv = AdaptiveAdversary(10, u_bar=2.0, delta=0.5)
        first = adv.test(0)
        for j in range(1, 10):
            adv.test(j)
        assert adv.test(0) == first == 2.0

    def test_counts_both_commitment_kinds(self):
        adv = AdaptiveAdversary(4, u_bar=2.0, delta=0.5)
        adv.run_untested(0)
        adv.run_untested(1)
        # budget (2 decisions) is used up by the untested commitments
        assert adv.test(2) == 0.0

    def test_double_commit_rejected(self):
        adv = AdaptiveAdversary(3, u_bar=2.0, delta=1.0)
        adv.test(0)
        with pytest.raises(ProtocolError):
            adv.run_untested(0)

    def test_parameter_domains(self):
        with pytest.raises(ValueError):
            AdaptiveAdversary(0)
        with pytest.raises(ValueError):
            AdaptiveAdversary(3, u_bar=0.5)
        with pytest.raises(ValueError):
            AdaptiveAdversary(3, delta=1.5)

    def test_full_run_scores_against_realized_instance(self):
        adv = AdaptiveAdversary(20, u_bar=2.0, delta=0.6)
        events = alpha_beta_sort(adv, 1.0, 1.0)
        out = outcome_from_schedule(events, adv)
        assert out.ratio_sum >= 1.0


class TestRandomInstance:
    def test_deterministic_under_seed(self):
        a = random_instance(6, 4.0, 123, "uniform")
        b = random_instance(6, 4.0, 123, "uniform")
        assert a == b

    def test_bounds_hold_for_all_profiles(self):
        for profile in ("uniform", "heavy_ratio", "near_threshold"):
            for i in range(30):
                for j in random_instance(20, 9.0, (1, i), profile):
                    assert 0.0 <= j.p <= j.u
                    assert 0.0 < j.u <= 9.0
                    assert j.t > 0.0

    def test_near_threshold_concentrates_ratios(self):
        jobs = random_instance(200, 5.0, 7, "near_threshold")
        inside = sum(1 for j in jobs if 0.9 <= j.ratio <= 2.2)
        assert inside >= 100

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            random_instance(0, 1.0, 0)
        with pytest.raises(ValueError):
            random_instance(1, 0.0, 0)
        with pytest.raises(ValueError):
            random_instance(1, 1.0, 0, "weird")


class TestSmallestRatioFirst:
    def test_trap_value_matches_closed_form(self):
        m, lam = 2, 2.0
        jobs = make_family(FamilySpec("ratio-trap", m=m, lam=lam, eps=1e-9))
        out, _, events = run_outcome(smallest_ratio_first, jobs)
        assert events[0].job_id == m  # the huge job goes first
        assert out.sum_completion == pytest.approx(
            m**3 + m**2 * (lam / 2 + 1) + m * lam / 2, abs=1e-6
        )

    def test_ratio_grows_without_bound(self):
        r10, _, _ = run_outcome(
            smallest_ratio_first, make_family(FamilySpec("ratio-trap", m=10, lam=2.0, eps=1e-6))
        )
        r100, _, _ = run_outcome(
            smallest_ratio_first, make_family(FamilySpec("ratio-trap", m=100, lam=2.0, eps=1e-6))
        )
        assert r100.ratio_sum > r10.ratio_sum > 2.0

    def test_sort_stays_bounded_on_the_same_instances(self):
        for m in (10, 100):
            jobs = make_family(FamilySpec("ratio-trap", m=m, lam=2.0, eps=1e-6))
            out, _, _ = run_outcome(lambda o: alpha_beta_sort(o, 1.0, 1.0), jobs)
            assert out.ratio_sum <= 4.0 + 1e-9

    def test_requires_unique_smallest_ratio(self):
        jobs = [Job(0, 2.0, 1.0, 1.0), Job(1, 2.0, 1.0, 1.0)]
        with pytest.raises(FamilyError):
            smallest_ratio_first(StaticOracle(jobs))
