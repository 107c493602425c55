"""Command-line front end: simulate, generate, sweep, optimize, audit, verify.

Exit codes: 0 success, 1 property violation, 2 usage error, 3 I/O error.
``TESTLAB_SEED`` serves as the fallback seed when ``--seed`` is absent.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from typing import Sequence

from . import adversaries, algorithms, analysis, bruteforce, core
from .core import GOLDEN_RATIO, Job, StaticOracle, format_time, outcome_from_schedule

RESULT_HEADER = ["alg", "instance", "n", "alg_value", "opt_value", "ratio"]
STATS_HEADER = ["alg", "family", "n", "trials", "mean", "std", "ci_lo", "ci_hi", "min", "max"]

SUM_ALGS = ("ab-sort", "rand-sort", "grr", "force-test")
MAKESPAN_ALGS = ("makespan-det", "makespan-rand")
RANDOMIZED_ALGS = ("rand-sort", "makespan-rand")
ALL_ALGS = SUM_ALGS + MAKESPAN_ALGS


def _resolve_seed(args: argparse.Namespace) -> int | None:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("TESTLAB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            return None
    return None


def _family_spec(args: argparse.Namespace, parser: argparse.ArgumentParser) -> adversaries.FamilySpec:
    beta = args.beta if args.beta is not None else 2.0
    try:
        return adversaries.FamilySpec(
            name=args.family,
            n=args.n,
            m=args.m,
            eps=args.eps,
            lam=args.lam,
            beta=beta,
            big=args.big,
        )
    except adversaries.FamilyError as exc:
        parser.error(str(exc))
        raise AssertionError  # unreachable


def _load_instance(
    args: argparse.Namespace, parser: argparse.ArgumentParser
) -> tuple[list[Job], str]:
    if (args.instance is None) == (args.family is None):
        parser.error("exactly one of --instance and --family is required")
    if args.instance is not None:
        jobs = core.read_instance_csv(args.instance)  # InstanceFormatError -> exit 3 in main
        return jobs, args.instance
    spec = _family_spec(args, parser)
    label = f"{spec.name}(n={spec.n},m={spec.m},eps={spec.eps:g})"
    return adversaries.make_family(spec), label


def _run_algorithm(name: str, oracle: StaticOracle, args: argparse.Namespace, seed: int | None):
    if name == "ab-sort":
        alpha = args.alpha if args.alpha is not None else 1.0
        beta = args.beta if args.beta is not None else 1.0
        return algorithms.alpha_beta_sort(oracle, alpha, beta)
    if name == "rand-sort":
        beta = args.beta if args.beta is not None else analysis.RECOMMENDED_TEST_BETA
        return algorithms.randomized_sort(
            oracle, beta, lambda r: algorithms.sort_test_probability(r, beta), seed
        )
    if name == "grr":
        return algorithms.golden_round_robin(oracle)
    if name == "force-test":
        return algorithms.force_testing(oracle)
    if name == "makespan-det":
        return algorithms.makespan_deterministic(oracle)
    if name == "makespan-rand":
        return algorithms.makespan_randomized(oracle, seed)
    raise AssertionError(name)


def _result_row(alg: str, label: str, oracle: StaticOracle, events) -> list[str]:
    outcome = outcome_from_schedule(events, oracle)
    if alg in MAKESPAN_ALGS:
        value, opt, ratio = outcome.makespan, outcome.opt_makespan, outcome.ratio_makespan
    else:
        value, opt, ratio = outcome.sum_completion, outcome.opt_sum, outcome.ratio_sum
    return [alg, label, str(oracle.n), format_time(value), format_time(opt), format_time(ratio)]


def _emit_rows(rows: list[list[str]], header: list[str], out: str | None) -> None:
    if out is None:
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        writer.writerows(rows)
    else:
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)


def cmd_simulate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    jobs, label = _load_instance(args, parser)
    seed = _resolve_seed(args)
    if args.alg in RANDOMIZED_ALGS and seed is None:
        parser.error(f"--seed (or TESTLAB_SEED) is required for {args.alg}")
    oracle = StaticOracle(jobs)
    events = _run_algorithm(args.alg, oracle, args, seed)
    _emit_rows([_result_row(args.alg, label, oracle, events)], RESULT_HEADER, args.out)
    if args.events is not None:
        core.write_events_csv(args.events, events)
    return 0


def cmd_family(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    spec = _family_spec(args, parser)
    jobs = adversaries.make_family(spec)
    core.write_instance_csv(args.out, jobs)
    return 0


def _parse_range(text: str, parser: argparse.ArgumentParser, integral: bool) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        parser.error(f"range must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (int(x) if integral else float(x) for x in parts)
    except ValueError:
        parser.error(f"non-numeric range {text!r}")
    if step <= 0 or stop < start:
        parser.error(f"empty range {text!r}")
    values: list[float] = []
    k = 0
    value = start
    while value <= stop + (0 if integral else 1e-12):
        values.append(value)
        k += 1
        value = start + k * step
    if not values:
        parser.error(f"empty range {text!r}")
    return values


def cmd_sweep(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if (args.n_range is None) == (args.r_range is None):
        parser.error("exactly one of --n-range and --r-range is required")
    seed = _resolve_seed(args)
    if args.alg in RANDOMIZED_ALGS and seed is None:
        parser.error(f"--seed (or TESTLAB_SEED) is required for {args.alg}")
    rows = []
    if args.n_range is not None:
        if args.family is None:
            parser.error("--n-range sweeps need --family")
        for n in _parse_range(args.n_range, parser, integral=True):
            sub = argparse.Namespace(**vars(args))
            sub.n = int(n)
            spec = _family_spec(sub, parser)
            label = f"{spec.name}(n={spec.n},m={spec.m},eps={spec.eps:g})"
            oracle = StaticOracle(adversaries.make_family(spec))
            events = _run_algorithm(args.alg, oracle, sub, seed)
            rows.append(_result_row(args.alg, label, oracle, events))
    else:
        if args.alg != "makespan-det":
            parser.error("--r-range sweeps support only makespan-det")
        for r in _parse_range(args.r_range, parser, integral=False):
            # Worst adversary response for a single job with ratio r.
            worst = None
            for p in (0.0, r):
                oracle = StaticOracle([Job(0, float(r), 1.0, p)])
                events = algorithms.makespan_deterministic(oracle)
                outcome = outcome_from_schedule(events, oracle)
                if worst is None or outcome.ratio_makespan > worst[1].ratio_makespan:
                    worst = (oracle, outcome, events)
            oracle, outcome, events = worst
            rows.append(
                [
                    args.alg,
                    f"single-job(r={r:g})",
                    "1",
                    format_time(outcome.makespan),
                    format_time(outcome.opt_makespan),
                    format_time(outcome.ratio_makespan),
                ]
            )
    _emit_rows(rows, RESULT_HEADER, args.out)
    return 0


def cmd_optimize(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.target == "alphabeta":
        alpha, beta, value = analysis.minimize_f_grid()
        print("target=alphabeta")
        print(f"alpha={alpha:.6f}")
        print(f"beta={beta:.6f}")
        print(f"f={value:.6f}")
    else:
        result = analysis.optimize_beta()
        print("target=beta")
        print(f"beta_star={result.beta_star:.6f}")
        print(f"worst_ratio={result.worst_ratio:.6f}")
        print(f"r_star={result.r_star:.6f}")
        print(f"r_hat={result.r_hat:.6f}")
        print(f"capped_region_max={result.capped_region_max:.6f}")
    return 0


def cmd_audit(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    jobs, label = _load_instance(args, parser)
    alpha = args.alpha if args.alpha is not None else 1.0
    beta = args.beta if args.beta is not None else 1.0
    oracle = StaticOracle(jobs)
    events = algorithms.alpha_beta_sort(oracle, alpha, beta)
    try:
        report = analysis.contribution_audit(events, oracle, alpha, beta)
    except analysis.AuditError as exc:
        print(f"AUDIT FAIL on {label}: {exc}")
        return 1
    print(f"AUDIT PASS on {label}: {report.pairs} pairs checked")
    for case in analysis.AUDIT_CASES:
        print(f"case {case}: {report.case_counts[case]}")
    return 0


def _unit_tests_instance(jobs: list[Job]) -> list[Job]:
    return [Job(j.id, j.u, 1.0, j.p) for j in jobs]


def cmd_verify(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.max_n > bruteforce.MAX_DECISION_JOBS:
        parser.error(f"--max-n must be <= {bruteforce.MAX_DECISION_JOBS}")
    seed = _resolve_seed(args)
    if seed is None:
        seed = 0
    trials = args.trials
    tol = core.VALIDATION_TOL
    failures: list[tuple[str, str, list[Job]]] = []

    def instance(tag: int, i: int, n: int) -> list[Job]:
        profile = adversaries.PROFILES[i % len(adversaries.PROFILES)]
        return adversaries.random_instance(n, 10.0, (seed, tag, i), profile)

    def record(suite: str, detail: str, jobs: list[Job]) -> None:
        failures.append((suite, detail, jobs))

    tallies: list[tuple[str, int, int]] = []

    # Suite 1: closed-form optimum vs decision enumeration.
    ok = bad = 0
    for i in range(trials):
        jobs = instance(1, i, 1 + i % args.max_n)
        expected = bruteforce.brute_opt_sum(jobs).best_value
        got = core.opt_sum_completion(jobs)
        if math.isclose(got, expected, rel_tol=1e-9, abs_tol=tol):
            ok += 1
        else:
            bad += 1
            record("oracle-sum", f"opt {got} != brute {expected}", jobs)
    tallies.append(("oracle-sum", ok, bad))

    # Suite 2: decision enumeration vs full permutation enumeration.
    ok = bad = 0
    for i in range(max(trials // 4, 1)):
        jobs = instance(2, i, 1 + i % bruteforce.MAX_PERMUTATION_JOBS)
        expected = bruteforce.brute_opt_sum_all_orders(jobs)
        got = bruteforce.brute_opt_sum(jobs).best_value
        if math.isclose(got, expected, rel_tol=1e-9, abs_tol=tol):
            ok += 1
        else:
            bad += 1
            record("oracle-orders", f"decisions {got} != all-orders {expected}", jobs)
    tallies.append(("oracle-orders", ok, bad))

    # Suite 3: pairwise contribution audit of the deterministic scheduler.
    ok = bad = 0
    for i in range(trials):
        jobs = instance(3, i, 1 + i % 20)
        oracle = StaticOracle(jobs)
        events = algorithms.alpha_beta_sort(oracle, 1.0, 1.0)
        try:
            analysis.contribution_audit(events, oracle, 1.0, 1.0)
            ok += 1
        except analysis.AuditError as exc:
            bad += 1
            record("audit", str(exc), jobs)
    tallies.append(("audit", ok, bad))

    # Suite 4: event-driven sharing vs closed-form completion times.
    ok = bad = 0
    for i in range(trials):
        jobs = instance(4, i, 1 + i % 20)
        oracle = StaticOracle(jobs)
        events = algorithms.golden_round_robin(oracle)
        outcome = outcome_from_schedule(events, oracle)
        works = algorithms.algorithmic_runtimes(oracle)
        ids = sorted(works)
        expected = algorithms.processor_sharing_completions([works[j] for j in ids])
        if all(abs(outcome.completion[j] - e) <= tol for j, e in zip(ids, expected)):
            ok += 1
        else:
            bad += 1
            record("ps-closed-form", "simulated completions diverge from closed form", jobs)
    tallies.append(("ps-closed-form", ok, bad))

    # Suite 5: sum-objective ratio bounds.
    ok = bad = 0
    for i in range(trials):
        jobs = instance(5, i, 1 + i % 20)
        unit = _unit_tests_instance(jobs)
        good = True
        for name, bound, builder, inst in (
            ("ab-sort", 4.0, lambda o: algorithms.alpha_beta_sort(o, 1.0, 1.0), jobs),
            ("grr", 2 * GOLDEN_RATIO, algorithms.golden_round_robin, jobs),
            ("force-test", 2.0, algorithms.force_testing, unit),
        ):
            oracle = StaticOracle(inst)
            outcome = outcome_from_schedule(builder(oracle), oracle)
            if not (1.0 - tol <= outcome.ratio_sum <= bound + tol):
                good = False
                record("sum-bounds", f"{name} ratio {outcome.ratio_sum} breaks bound {bound}", inst)
        if good:
            ok += 1
        else:
            bad += 1
    tallies.append(("sum-bounds", ok, bad))

    # Suite 6: makespan ratio bound.
    ok = bad = 0
    for i in range(trials):
        jobs = instance(6, i, 1 + i % 20)
        oracle = StaticOracle(jobs)
        outcome = outcome_from_schedule(algorithms.makespan_deterministic(oracle), oracle)
        if 1.0 - tol <= outcome.ratio_makespan <= GOLDEN_RATIO + tol:
            ok += 1
        else:
            bad += 1
            record("makespan-bounds", f"ratio {outcome.ratio_makespan}", jobs)
    tallies.append(("makespan-bounds", ok, bad))

    for suite, good, failed in tallies:
        print(f"{suite}: {good} pass, {failed} fail")
    if failures:
        suite, detail, jobs = failures[0]
        core.write_instance_csv(args.counterexample_out, jobs)
        print(f"FAIL [{suite}] {detail}")
        print(f"counterexample written to {args.counterexample_out}")
        return 1
    print("all suites passed")
    return 0


def _add_instance_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--instance", help="instance CSV path (header id,u,t,p)")
    p.add_argument("--family", choices=adversaries.FAMILY_NAMES, help="generated family")
    p.add_argument("--n", type=int, default=1, help="primary family size")
    p.add_argument("--m", type=int, default=1, help="secondary family size")
    p.add_argument("--eps", type=float, default=1e-4, help="family perturbation")
    p.add_argument("--lam", type=float, default=2.0, help="ratio-trap threshold")
    p.add_argument("--big", type=float, default=None, help="override for the large upper bound")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schedtest", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one algorithm on one instance")
    p_sim.add_argument("--alg", required=True, choices=ALL_ALGS)
    p_sim.add_argument("--alpha", type=float, default=None)
    p_sim.add_argument("--beta", type=float, default=None)
    p_sim.add_argument("--seed", type=int, default=None)
    _add_instance_options(p_sim)
    p_sim.add_argument("--out", help="results CSV path (default: stdout)")
    p_sim.add_argument("--events", help="also write the event log CSV here")
    p_sim.set_defaults(func=cmd_simulate)

    p_fam = sub.add_parser("family", help="materialize a family instance to CSV")
    p_fam.add_argument("--family", required=True, choices=adversaries.FAMILY_NAMES)
    p_fam.add_argument("--n", type=int, default=1)
    p_fam.add_argument("--m", type=int, default=1)
    p_fam.add_argument("--eps", type=float, default=1e-4)
    p_fam.add_argument("--lam", type=float, default=2.0)
    p_fam.add_argument("--beta", type=float, default=None)
    p_fam.add_argument("--big", type=float, default=None)
    p_fam.add_argument("--out", required=True)
    p_fam.set_defaults(func=cmd_family)

    p_sweep = sub.add_parser("sweep", help="run an algorithm across sizes or ratios")
    p_sweep.add_argument("--alg", required=True, choices=ALL_ALGS)
    p_sweep.add_argument("--alpha", type=float, default=None)
    p_sweep.add_argument("--beta", type=float, default=None)
    p_sweep.add_argument("--seed", type=int, default=None)
    _add_instance_options(p_sweep)
    p_sweep.add_argument("--n-range", help="start:stop:step over the family size")
    p_sweep.add_argument("--r-range", help="start:stop:step over single-job ratios")
    p_sweep.add_argument("--out", help="results CSV path (default: stdout)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_opt = sub.add_parser("optimize", help="run the parameter searches")
    p_opt.add_argument("--target", required=True, choices=("alphabeta", "beta"))
    p_opt.set_defaults(func=cmd_optimize)

    p_audit = sub.add_parser("audit", help="pairwise contribution audit of ab-sort")
    p_audit.add_argument("--alpha", type=float, default=None)
    p_audit.add_argument("--beta", type=float, default=None)
    _add_instance_options(p_audit)
    p_audit.set_defaults(func=cmd_audit)

    p_verify = sub.add_parser("verify", help="run the cross-check suites")
    p_verify.add_argument("--max-n", type=int, default=8)
    p_verify.add_argument("--trials", type=int, default=200)
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--counterexample-out", default="verify_counterexample.csv")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except core.InstanceFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
