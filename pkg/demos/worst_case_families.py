"""Run each scheduler on the instance family built to punish it.

Every family has a closed-form worst-case story; this script materializes
the instances at a few sizes and shows the simulated ratio marching toward
the theoretical limit.
"""

from schedtest import (
    FamilySpec,
    GOLDEN_RATIO,
    StaticOracle,
    alpha_beta_sort,
    force_testing,
    golden_round_robin,
    make_family,
    outcome_from_schedule,
    smallest_ratio_first,
)


def ratio(builder, jobs, objective="sum"):
    oracle = StaticOracle(jobs)
    out = outcome_from_schedule(builder(oracle), oracle)
    return out.ratio_sum if objective == "sum" else out.ratio_makespan


def main():
    print("cheap-test family vs the (1,1) scaled-priority scheduler")
    print("limit: 3 as n grows and eps vanishes")
    for n in (10, 100, 1000, 10000):
        jobs = make_family(FamilySpec("lb3", n=n, eps=1e-4))
        print(f"  n={n:>6}  ratio={ratio(lambda o: alpha_beta_sort(o, 1.0, 1.0), jobs):.4f}")

    print()
    print("golden-threshold sharing scheduler on its tight family")
    print(f"limit: 2*phi = {2 * GOLDEN_RATIO:.4f}")
    for n in (10, 100, 1000, 10000):
        jobs = make_family(FamilySpec("grr-tight", n=n))
        print(f"  n={n:>6}  ratio={ratio(golden_round_robin, jobs):.4f}")

    print()
    print("forced tests on zero-work jobs (unit test times)")
    print("limit: 2")
    for n in (10, 100, 1000):
        jobs = make_family(FamilySpec("force-test-tight", n=n))
        print(f"  n={n:>6}  ratio={ratio(force_testing, jobs):.4f}")

    print()
    print("the ratio trap: serving the smallest u/t ratio first is unbounded,")
    print("while the scaled-priority scheduler stays under its bound of 4")
    for m in (10, 50, 200):
        jobs = make_family(FamilySpec("ratio-trap", m=m, lam=2.0, eps=1e-6))
        bad = ratio(smallest_ratio_first, jobs)
        good = ratio(lambda o: alpha_beta_sort(o, 1.0, 1.0), jobs)
        print(f"  m={m:>4}  ratio-first={bad:8.2f}   scaled-priority={good:.3f}")


if __name__ == "__main__":
    main()
