"""Exhaustive ground truth for small instances.

Enumerates every test/no-test decision vector (and, for very small
instances, every job permutation) to validate the closed-form optimum.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from .core import Job

MAX_DECISION_JOBS = 12
MAX_PERMUTATION_JOBS = 5


@dataclass(frozen=True)
class BruteForceResult:
    best_value: float
    best_decisions: tuple[bool, ...]
    best_order: tuple[int, ...]


def _realized_duration(job: Job, tested: bool) -> float:
    return job.t + job.p if tested else job.u


def _spt_key(jobs: Sequence[Job], durations: Sequence[float]):
    # Test hook: a deliberately wrong comparator for fault-injection runs.
    if os.environ.get("SCHEDTEST_BUGGY_SPT"):
        return lambda i: (jobs[i].u, i)
    return lambda i: (durations[i], i)


def brute_opt_sum(jobs: Sequence[Job], max_n: int = MAX_DECISION_JOBS) -> BruteForceResult:
    """Minimum sum of completion times over all test decisions.

    For each of the ``2^n`` decision vectors the jobs run shortest-first
    on their realized durations (optimal on a single machine), so only
    decisions need enumerating.
    """
    n = len(jobs)
    if n > max_n:
        raise ValueError(f"instance too large for decision enumeration: {n} > {max_n}")
    best_value = 0.0
    best_mask = 0
    best_order: tuple[int, ...] = ()
    found = False
    for mask in range(1 << n):
        durations = [_realized_duration(jobs[i], bool(mask >> i & 1)) for i in range(n)]
        order = sorted(range(n), key=_spt_key(jobs, durations))
        clock = 0.0
        total = 0.0
        for i in order:
            clock += durations[i]
            total += clock
        if not found or total < best_value:
            found = True
            best_value = total
            best_mask = mask
            best_order = tuple(jobs[i].id for i in order)
    decisions = tuple(bool(best_mask >> i & 1) for i in range(n))
    return BruteForceResult(best_value=best_value, best_decisions=decisions, best_order=best_order)


def brute_opt_sum_all_orders(jobs: Sequence[Job], max_n: int = MAX_PERMUTATION_JOBS) -> float:
    """Minimum sum of completion times over decisions *and* permutations.

    A deeper cross-check that the shortest-first rule really is optimal;
    only feasible for a handful of jobs.
    """
    n = len(jobs)
    if n > max_n:
        raise ValueError(f"instance too large for permutation enumeration: {n} > {max_n}")
    best = math.inf if n else 0.0
    for mask in range(1 << n):
        durations = [_realized_duration(jobs[i], bool(mask >> i & 1)) for i in range(n)]
        for order in permutations(range(n)):
            clock = 0.0
            total = 0.0
            for i in order:
                clock += durations[i]
                total += clock
            if total < best:
                best = total
    return best


def brute_opt_makespan(jobs: Sequence[Job]) -> float:
    """Minimum makespan: job order is irrelevant, so each job independently
    picks the cheaper of testing and running untested."""
    return math.fsum(min(_realized_duration(j, True), _realized_duration(j, False)) for j in jobs)
