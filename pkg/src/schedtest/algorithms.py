"""Schedulers for jobs with testable processing times.

All schedulers interact with the instance only through
:class:`~schedtest.core.InstanceOracle` and return a chronological event log.
Ties in every priority queue break by ascending job id, which makes each
run fully deterministic given the oracle and (for randomized variants) the
seed.
"""

from __future__ import annotations

import math
from heapq import heapify, heappop, heappush
from typing import Callable, Sequence

import numpy as np

from .core import (
    GOLDEN_RATIO,
    EventKind,
    InstanceOracle,
    JobView,
    ScheduleEvent,
)

Seed = int | Sequence[int]


class UnsupportedInstanceError(Exception):
    """The instance does not satisfy an algorithm's precondition."""


class AnalysisDomainError(ArithmeticError):
    """A closed-form parameter formula was evaluated outside its domain."""


def wants_test(view: JobView, threshold: float) -> bool:
    """Threshold rule shared by the schedulers: test iff ``u/t >= threshold``.

    Free tests (``t == 0``) always pass the rule since their ratio is +inf.
    """
    return view.ratio >= threshold


# Heap actions, also the comparison fallback so pending tests with p == 0
# never tie with anything else.
_RUN_UNTESTED, _TEST, _RUN_TESTED = 0, 1, 2


def _scaled_priority_run(oracle: InstanceOracle, tested: set[int], beta: float) -> list[ScheduleEvent]:
    """Run the scaled-priority loop over a fixed test/no-test partition.

    Untested jobs carry priority ``u``, pending tests ``beta * t``, and a
    revealed job its true ``p``.  The cheapest pending step always runs
    next; a finished test re-inserts the job with its revealed time.
    """
    heap: list[tuple[float, int, int, JobView]] = []
    for view in oracle.jobs:
        if view.id in tested:
            heap.append((beta * view.t, view.id, _TEST, view))
        else:
            heap.append((view.u, view.id, _RUN_UNTESTED, view))
    heapify(heap)

    clock = 0.0
    events: list[ScheduleEvent] = []
    while heap:
        _, job_id, action, view = heappop(heap)
        if action == _RUN_UNTESTED:
            oracle.run_untested(job_id)
            events.append(ScheduleEvent(job_id, EventKind.UNTESTED_RUN, clock, clock + view.u))
            clock += view.u
        elif action == _TEST:
            p = oracle.test(job_id)
            events.append(ScheduleEvent(job_id, EventKind.TEST, clock, clock + view.t))
            clock += view.t
            heappush(heap, (p, job_id, _RUN_TESTED, view))
        else:
            p = oracle.test(job_id)  # memoized reveal
            events.append(ScheduleEvent(job_id, EventKind.TESTED_RUN, clock, clock + p))
            clock += p
    return events


def alpha_beta_sort(oracle: InstanceOracle, alpha: float = 1.0, beta: float = 1.0) -> list[ScheduleEvent]:
    """Deterministic scaled-priority scheduler for the sum of completions.

    Tests exactly the jobs with ``u/t >= alpha``, stretches pending-test
    priorities by ``beta``, then always serves the smallest priority.
    """
    if not alpha >= 1.0:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if not beta >= 1.0:
        raise ValueError(f"beta must be >= 1, got {beta}")
    tested = {v.id for v in oracle.jobs if wants_test(v, alpha)}
    return _scaled_priority_run(oracle, tested, beta)


def randomized_sort(
    oracle: InstanceOracle,
    beta: float,
    p_fn: Callable[[float], float],
    seed: Seed,
) -> list[ScheduleEvent]:
    """Randomized variant: test each job independently with probability ``p_fn(u/t)``.

    Consumes one uniform variate per job in ascending id order from a
    seeded generator, so runs are reproducible across platforms.
    """
    if not beta >= 1.0:
        raise ValueError(f"beta must be >= 1, got {beta}")
    rng = np.random.default_rng(seed)
    draws = rng.random(oracle.n)
    tested: set[int] = set()
    for view, draw in zip(oracle.jobs, draws):
        prob = p_fn(view.ratio)
        if not 0.0 <= prob <= 1.0:
            raise ValueError(f"test probability {prob} for ratio {view.ratio} outside [0, 1]")
        if draw < prob:
            tested.add(view.id)
    return _scaled_priority_run(oracle, tested, beta)


def sort_test_probability(r: float, beta: float) -> float:
    """Testing probability for the randomized scheduler on any ratio.

    Jobs whose test costs more than their upper bound (``r < 1``) are never
    tested: their optimal runtime is the upper bound itself, so running
    them untested already meets the per-job guarantee.  All other ratios
    use :func:`capped_test_probability`.
    """
    return 0.0 if r < 1.0 else capped_test_probability(r, beta)


def capped_test_probability(r: float, beta: float) -> float:
    """Testing probability that balances the two worst-case branches, capped at 1.

    For ratio ``r`` and stretch ``beta`` this is the intersection point of
    the two linear per-job bound branches (see :mod:`schedtest.analysis`),
    clipped to the unit interval.  Raises :class:`AnalysisDomainError`
    when the intersection denominator is not positive.
    """
    if not r >= 1.0:
        raise ValueError(f"ratio must be >= 1, got {r}")
    if not beta >= 1.0:
        raise ValueError(f"beta must be >= 1, got {beta}")
    if math.isinf(r):
        return 1.0
    m = max((1.0 + beta) / r, 1.0 + 1.0 / beta, 1.0 + 1.0 / r)
    numerator = r * r + 2.0 * beta * r * r - r - 2.0 * beta * r
    denominator = (
        r * r + 2.0 * beta * r * r - r - 3.0 * beta * r - beta * beta * r + beta + beta * r * m
    )
    if denominator <= 0.0:
        raise AnalysisDomainError(f"intersection denominator {denominator} at r={r}, beta={beta}")
    return min(numerator / denominator, 1.0)


def force_testing(oracle: InstanceOracle) -> list[ScheduleEvent]:
    """Unit-test-time scheduler: run small jobs untested, then test everything.

    Jobs with ``u < 2`` run untested in increasing ``u``; all others are
    tested up front and executed shortest-first.  Only defined when every
    test takes exactly one time unit.
    """
    views = oracle.jobs
    if any(v.t != 1.0 for v in views):
        raise UnsupportedInstanceError("force_testing requires unit test times")
    clock = 0.0
    events: list[ScheduleEvent] = []
    small = sorted((v for v in views if v.u < 2.0), key=lambda v: (v.u, v.id))
    for view in small:
        oracle.run_untested(view.id)
        events.append(ScheduleEvent(view.id, EventKind.UNTESTED_RUN, clock, clock + view.u))
        clock += view.u
    big = [v for v in views if v.u >= 2.0]
    revealed: list[tuple[float, int]] = []
    for view in big:
        p = oracle.test(view.id)
        events.append(ScheduleEvent(view.id, EventKind.TEST, clock, clock + 1.0))
        clock += 1.0
        revealed.append((p, view.id))
    for p, job_id in sorted(revealed):
        events.append(ScheduleEvent(job_id, EventKind.TESTED_RUN, clock, clock + p))
        clock += p
    return events


# Heap markers for the processor-sharing simulation.
_PHASE_TEST_DONE, _PHASE_COMPLETE = 0, 1


def golden_round_robin(oracle: InstanceOracle) -> list[ScheduleEvent]:
    """Preemptive scheduler: golden-ratio test rule plus ideal processor sharing.

    Tests jobs with ``u/t >= GOLDEN_RATIO``.  All jobs then share the
    machine equally (each of ``k`` active jobs progresses at rate ``1/k``,
    the vanishing-quantum limit of round robin).  A tested job's revealed
    time extends its work seamlessly after the test, keeping it in the
    rotation.  Returns one shared slice per active job between epochs.

    Commitments happen at time zero in ascending id order, matching the
    first rotation of the discrete scheme.
    """
    views = oracle.jobs
    revealed: dict[int, float] = {}
    heap: list[tuple[float, int, int]] = []
    for view in views:
        if wants_test(view, GOLDEN_RATIO):
            revealed[view.id] = oracle.test(view.id)
            heap.append((view.t, view.id, _PHASE_TEST_DONE))
        else:
            oracle.run_untested(view.id)
            heap.append((view.u, view.id, _PHASE_COMPLETE))
    heapify(heap)

    active = {view.id for view in views}
    events: list[ScheduleEvent] = []
    clock = 0.0
    progress = 0.0  # work received so far by every currently active job
    while heap:
        target, job_id, phase = heappop(heap)
        if target > progress:
            span = (target - progress) * len(active)
            members = frozenset(active)
            for jid in sorted(active):
                events.append(
                    ScheduleEvent(jid, EventKind.SHARED_SLICE, clock, clock + span, members)
                )
            clock += span
            progress = target
        if phase == _PHASE_TEST_DONE:
            view = oracle.view(job_id)
            heappush(heap, (view.t + revealed[job_id], job_id, _PHASE_COMPLETE))
        else:
            active.remove(job_id)
    return events


def processor_sharing_completions(works: Sequence[float]) -> list[float]:
    """Closed-form completion times of equal processor sharing from time zero.

    With works sorted ascending (ties by position), the job in sorted slot
    ``i`` finishes at ``sum(smaller works) + (n - i) * own work``.  Serves
    as an independent check of the event-driven simulation.
    """
    n = len(works)
    order = sorted(range(n), key=lambda i: (works[i], i))
    completions = [0.0] * n
    prefix = 0.0
    for pos, idx in enumerate(order):
        completions[idx] = prefix + (n - pos) * works[idx]
        prefix += works[idx]
    return completions


def _run_single_pass(oracle: InstanceOracle, tested: set[int]) -> list[ScheduleEvent]:
    clock = 0.0
    events: list[ScheduleEvent] = []
    for view in oracle.jobs:
        if view.id in tested:
            p = oracle.test(view.id)
            events.append(ScheduleEvent(view.id, EventKind.TEST, clock, clock + view.t))
            clock += view.t
            events.append(ScheduleEvent(view.id, EventKind.TESTED_RUN, clock, clock + p))
            clock += p
        else:
            oracle.run_untested(view.id)
            events.append(ScheduleEvent(view.id, EventKind.UNTESTED_RUN, clock, clock + view.u))
            clock += view.u
    return events


def makespan_deterministic(oracle: InstanceOracle) -> list[ScheduleEvent]:
    """Makespan scheduler: test iff ``u/t >= GOLDEN_RATIO``; order is irrelevant."""
    tested = {v.id for v in oracle.jobs if wants_test(v, GOLDEN_RATIO)}
    return _run_single_pass(oracle, tested)


def makespan_test_probability(r: float) -> float:
    """Testing probability ``1 - 1/(r^2 - r + 1)`` of the randomized makespan rule.

    Ratios below one never test: the formula would go negative there, and
    running untested is already optimal when the test alone exceeds the
    upper bound.
    """
    if not r >= 0.0:
        raise ValueError(f"ratio must be >= 0, got {r}")
    if r < 1.0:
        return 0.0
    if math.isinf(r):
        return 1.0
    return 1.0 - 1.0 / (r * r - r + 1.0)


def makespan_randomized(oracle: InstanceOracle, seed: Seed) -> list[ScheduleEvent]:
    """Randomized makespan scheduler with per-job testing probability.

    Each job is tested independently with probability
    ``1 - 1/(r^2 - r + 1)``, drawing one variate per job in id order.
    """
    rng = np.random.default_rng(seed)
    draws = rng.random(oracle.n)
    tested = {
        view.id
        for view, draw in zip(oracle.jobs, draws)
        if draw < makespan_test_probability(view.ratio)
    }
    return _run_single_pass(oracle, tested)


def algorithmic_runtimes(oracle: InstanceOracle) -> dict[int, float]:
    """Per-job machine time a finished run spent: ``t + p`` if tested, else ``u``."""
    out = {}
    for job in oracle.realized():
        out[job.id] = job.t + job.p if oracle.was_tested(job.id) else job.u
    return out
