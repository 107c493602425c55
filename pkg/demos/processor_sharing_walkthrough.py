"""Walk through one preemptive run, event by event.

Three jobs enter the golden-threshold sharing scheduler; the event log
shows the machine splitting equally among active jobs, a test finishing
mid-stream (the job simply keeps rotating with its revealed time), and the
completions matching the closed-form processor-sharing formula.
"""

from schedtest import (
    Job,
    StaticOracle,
    golden_round_robin,
    outcome_from_schedule,
    processor_sharing_completions,
)
from schedtest.algorithms import algorithmic_runtimes


def main():
    jobs = [
        Job(0, 8.0, 1.0, 2.0),   # tested: ratio 8, total work 1 + 2 = 3
        Job(1, 2.0, 2.5, 1.0),   # untested: ratio < phi, work 2
        Job(2, 6.0, 0.5, 4.5),   # tested: ratio 12, total work 0.5 + 4.5 = 5
    ]
    oracle = StaticOracle(jobs)
    events = golden_round_robin(oracle)

    print("event log (one shared slice per active job per epoch):")
    for ev in events:
        members = ",".join(str(j) for j in sorted(ev.share_set))
        print(f"  job {ev.job_id}: [{ev.start:5.2f}, {ev.end:5.2f}] sharing with {{{members}}}")

    out = outcome_from_schedule(events, oracle)
    works = algorithmic_runtimes(oracle)
    closed = processor_sharing_completions([works[j] for j in sorted(works)])
    print()
    print("completions, simulated vs closed form:")
    for job_id, expected in zip(sorted(works), closed):
        print(f"  job {job_id}: work {works[job_id]:.2f}  "
              f"simulated {out.completion[job_id]:.6f}  closed form {expected:.6f}")
    print()
    print(f"sum of completions {out.sum_completion:.4f}, optimum {out.opt_sum:.4f}, "
          f"ratio {out.ratio_sum:.4f} (bound: 2*phi = 3.2361)")


if __name__ == "__main__":
    main()
