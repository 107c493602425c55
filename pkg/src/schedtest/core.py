"""Domain model for single-machine scheduling with testable jobs.

A job can be run untested for its known upper bound ``u``, or tested first
(costing ``t`` machine time) to reveal its true processing time ``p`` and
then run for exactly ``p``.  Oracles hide ``p`` until a test is committed,
so schedulers written against :class:`InstanceOracle` can never peek.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Iterable, NamedTuple, Sequence

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0

#: Absolute tolerance for validation-time comparisons.  Scheduling decisions
#: themselves always compare exactly; only assertions are tolerant.
VALIDATION_TOL = 1e-9


class MalformedScheduleError(Exception):
    """An event log does not describe a feasible single-machine schedule."""


class ProtocolError(Exception):
    """An algorithm violated the oracle interaction protocol."""


class InstanceFormatError(ValueError):
    """An instance file could not be parsed into valid jobs."""


@dataclass(frozen=True)
class Job:
    """One job: public upper bound ``u``, test time ``t``, hidden time ``p``.

    Invariants: ``0 <= p <= u`` and ``t >= 0``.
    """

    id: int
    u: float
    t: float
    p: float

    def __post_init__(self) -> None:
        if not (self.u >= 0.0 and math.isfinite(self.u)):
            raise ValueError(f"job {self.id}: upper bound must be finite and >= 0, got {self.u}")
        if not (self.t >= 0.0 and math.isfinite(self.t)):
            raise ValueError(f"job {self.id}: test time must be finite and >= 0, got {self.t}")
        if not 0.0 <= self.p <= self.u:
            raise ValueError(f"job {self.id}: processing time {self.p} outside [0, {self.u}]")

    @property
    def ratio(self) -> float:
        """Upper bound over test time; +inf for free tests (``t == 0``)."""
        return math.inf if self.t == 0.0 else self.u / self.t


class JobView(NamedTuple):
    """The algorithm-facing part of a job: everything except ``p``."""

    id: int
    u: float
    t: float

    @property
    def ratio(self) -> float:
        return math.inf if self.t == 0.0 else self.u / self.t


def optimal_runtime(job: Job) -> float:
    """Time the offline optimum spends on this job: ``min(u, t + p)``."""
    return min(job.u, job.t + job.p)


def opt_sum_completion(jobs: Iterable[Job]) -> float:
    """Offline-optimal sum of completion times.

    The optimum spends ``min(u, t + p)`` per job and orders jobs shortest
    first, so with runtimes sorted non-increasingly the value is
    ``sum(position * runtime)``.
    """
    runtimes = sorted((optimal_runtime(j) for j in jobs), reverse=True)
    return math.fsum(i * rho for i, rho in enumerate(runtimes, start=1))


def opt_makespan(jobs: Iterable[Job]) -> float:
    """Offline-optimal makespan: job order is irrelevant, so just the sum."""
    return math.fsum(optimal_runtime(j) for j in jobs)


class EventKind(str, Enum):
    UNTESTED_RUN = "UntestedRun"
    TEST = "Test"
    TESTED_RUN = "TestedRun"
    SHARED_SLICE = "SharedSlice"


@dataclass(frozen=True, slots=True)
class ScheduleEvent:
    """One timed entry of a schedule log.

    Full-rate events (runs and tests) occupy the whole machine.  A
    ``SHARED_SLICE`` gives ``job_id`` rate ``1/len(share_set)`` during
    ``[start, end]``; every member of ``share_set`` emits its own slice for
    the same interval, so the aggregate rate is one.
    """

    job_id: int
    kind: EventKind
    start: float
    end: float
    share_set: frozenset[int] | None = None

    def __post_init__(self) -> None:
        if self.end < self.start:
            raise MalformedScheduleError(f"event for job {self.job_id} ends before it starts")
        if (self.kind is EventKind.SHARED_SLICE) != (self.share_set is not None):
            raise MalformedScheduleError("share_set is required exactly for shared slices")

    @property
    def rate(self) -> float:
        if self.share_set is None:
            return 1.0
        return 1.0 / len(self.share_set)

    @property
    def work(self) -> float:
        """Machine time this event dedicates to its job."""
        return (self.end - self.start) * self.rate


@dataclass(frozen=True)
class Outcome:
    """Objective values of one run next to the offline optimum."""

    completion: dict[int, float]
    sum_completion: float
    makespan: float
    opt_sum: float
    opt_makespan: float
    ratio_sum: float
    ratio_makespan: float


class _Commit(IntEnum):
    TESTED = 1
    UNTESTED = 2


class InstanceOracle:
    """Algorithm-facing view of an instance.

    ``u`` and ``t`` are public through :attr:`jobs`; ``p`` is produced by
    :meth:`test`.  Both :meth:`test` and :meth:`run_untested` are irrevocable
    commitments, counted in commitment order so adaptive adversaries can
    react to them.  Repeated ``test`` calls are idempotent (memoized);
    committing a job twice in conflicting ways is a protocol error.
    """

    def __init__(self, views: Sequence[JobView]):
        ids = [v.id for v in views]
        if len(set(ids)) != len(ids):
            raise ValueError("job ids must be unique")
        self._views: tuple[JobView, ...] = tuple(sorted(views, key=lambda v: v.id))
        self._by_id = {v.id: v for v in self._views}
        self._commits: dict[int, _Commit] = {}
        self._p: dict[int, float] = {}
        self._decided = 0

    @property
    def jobs(self) -> tuple[JobView, ...]:
        return self._views

    @property
    def n(self) -> int:
        return len(self._views)

    @property
    def decided_count(self) -> int:
        return self._decided

    def view(self, job_id: int) -> JobView:
        return self._by_id[job_id]

    def test(self, job_id: int) -> float:
        """Commit to testing ``job_id`` and reveal its processing time."""
        state = self._commits.get(job_id)
        if state is _Commit.TESTED:
            return self._p[job_id]
        if state is _Commit.UNTESTED:
            raise ProtocolError(f"job {job_id} already committed to run untested")
        view = self._by_id[job_id]
        self._decided += 1
        p = self._decide(job_id, was_tested=True)
        if not 0.0 <= p <= view.u:
            raise ProtocolError(f"revealed time {p} for job {job_id} outside [0, {view.u}]")
        self._commits[job_id] = _Commit.TESTED
        self._p[job_id] = p
        return p

    def run_untested(self, job_id: int) -> None:
        """Commit to running ``job_id`` untested.  The true ``p`` stays hidden."""
        if job_id in self._commits:
            raise ProtocolError(f"job {job_id} committed twice")
        if job_id not in self._by_id:
            raise KeyError(job_id)
        self._decided += 1
        p = self._decide(job_id, was_tested=False)
        self._commits[job_id] = _Commit.UNTESTED
        self._p[job_id] = p

    def was_tested(self, job_id: int) -> bool:
        return self._commits.get(job_id) is _Commit.TESTED

    def committed(self, job_id: int) -> bool:
        return job_id in self._commits

    def realized(self) -> tuple[Job, ...]:
        """The instance with all processing times fixed.

        Only available once every job has been committed, because adaptive
        oracles decide processing times at commitment.
        """
        missing = [v.id for v in self._views if v.id not in self._p]
        if missing:
            raise ProtocolError(f"processing times still undecided for jobs {missing}")
        return tuple(Job(v.id, v.u, v.t, self._p[v.id]) for v in self._views)

    def _decide(self, job_id: int, was_tested: bool) -> float:
        raise NotImplementedError


class StaticOracle(InstanceOracle):
    """Oracle over a fixed instance whose processing times are predetermined."""

    def __init__(self, jobs: Sequence[Job]):
        super().__init__([JobView(j.id, j.u, j.t) for j in jobs])
        self._true_p = {j.id: j.p for j in jobs}
        self._instance = tuple(sorted(jobs, key=lambda j: j.id))

    def _decide(self, job_id: int, was_tested: bool) -> float:
        return self._true_p[job_id]

    def realized(self) -> tuple[Job, ...]:
        return self._instance


def _ratio(value: float, opt: float) -> float:
    if opt == 0.0:
        return 1.0 if value == 0.0 else math.inf
    return value / opt


def _check_capacity(events: Sequence[ScheduleEvent]) -> None:
    # Sweep event boundaries; the aggregate rate may never exceed one.
    # Ends sort before starts at equal times so touching events are fine.
    boundaries: list[tuple[float, int, float]] = []
    for ev in events:
        if ev.end > ev.start:
            boundaries.append((ev.start, 1, ev.rate))
            boundaries.append((ev.end, 0, -ev.rate))
    boundaries.sort(key=lambda b: (b[0], b[1]))
    load = 0.0
    for _, _, delta in boundaries:
        load += delta
        if load > 1.0 + VALIDATION_TOL:
            raise MalformedScheduleError(f"aggregate machine rate {load} exceeds capacity")


def outcome_from_schedule(events: Sequence[ScheduleEvent], oracle: InstanceOracle) -> Outcome:
    """Validate an event log and score it against the offline optimum.

    Raises :class:`MalformedScheduleError` when some job's required work is
    not exactly covered or the machine is ever oversubscribed.
    """
    work: dict[int, float] = {v.id: 0.0 for v in oracle.jobs}
    completion: dict[int, float] = {v.id: 0.0 for v in oracle.jobs}
    for ev in events:
        if ev.job_id not in work:
            raise MalformedScheduleError(f"event for unknown job {ev.job_id}")
        work[ev.job_id] += ev.work
        completion[ev.job_id] = max(completion[ev.job_id], ev.end)
    _check_capacity(events)

    for view in oracle.jobs:
        if not oracle.committed(view.id):
            raise MalformedScheduleError(f"job {view.id} was never scheduled")
    realized = oracle.realized()
    for job in realized:
        required = job.t + job.p if oracle.was_tested(job.id) else job.u
        if abs(work[job.id] - required) > VALIDATION_TOL:
            raise MalformedScheduleError(
                f"job {job.id}: covered work {work[job.id]} != required {required}"
            )

    sum_completion = math.fsum(completion.values())
    makespan = max(completion.values(), default=0.0)
    opt_sum = opt_sum_completion(realized)
    opt_ms = opt_makespan(realized)
    return Outcome(
        completion=completion,
        sum_completion=sum_completion,
        makespan=makespan,
        opt_sum=opt_sum,
        opt_makespan=opt_ms,
        ratio_sum=_ratio(sum_completion, opt_sum),
        ratio_makespan=_ratio(makespan, opt_ms),
    )


def format_time(x: float) -> str:
    """Render a time value with at least 12 significant digits.

    Falls back to ``repr`` when 13 digits would not round-trip the float
    exactly, so written files always re-read to identical values.
    """
    s = f"{x:.12e}"
    return s if float(s) == x else repr(x)


INSTANCE_HEADER = ["id", "u", "t", "p"]


def write_instance_csv(path: str, jobs: Iterable[Job]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(INSTANCE_HEADER)
        for j in jobs:
            writer.writerow([j.id, format_time(j.u), format_time(j.t), format_time(j.p)])


def read_instance_csv(path: str) -> list[Job]:
    """Parse a static instance file; ``p`` is mandatory for every row."""
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != INSTANCE_HEADER:
                raise InstanceFormatError(f"{path}: expected header {','.join(INSTANCE_HEADER)}")
            jobs = []
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 4:
                    raise InstanceFormatError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
                try:
                    jobs.append(Job(int(row[0]), float(row[1]), float(row[2]), float(row[3])))
                except ValueError as exc:
                    raise InstanceFormatError(f"{path}:{lineno}: {exc}") from exc
    except OSError as exc:
        raise InstanceFormatError(f"{path}: {exc}") from exc
    return jobs


EVENT_HEADER = ["event_index", "job_id", "kind", "start", "end", "share_set"]


def write_events_csv(path: str, events: Sequence[ScheduleEvent]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(EVENT_HEADER)
        for i, ev in enumerate(events):
            share = ";".join(str(j) for j in sorted(ev.share_set)) if ev.share_set else ""
            writer.writerow(
                [i, ev.job_id, ev.kind.value, format_time(ev.start), format_time(ev.end), share]
            )
