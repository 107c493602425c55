"""Worst-case instance families, an adaptive adversary, and random generators.

Each family is a parameterized static instance that drives one of the
schedulers (or a straw-man policy) toward its worst ratio.  The adaptive
adversary instead fixes processing times live, in reaction to the
algorithm's irrevocable commitments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    GOLDEN_RATIO,
    EventKind,
    InstanceOracle,
    Job,
    JobView,
    ScheduleEvent,
)


class FamilyError(ValueError):
    """A family was requested with parameters outside its domain."""


FAMILY_NAMES = (
    "lb3",
    "high-alpha",
    "high-beta",
    "two-sets",
    "ratio-trap",
    "grr-tight",
    "force-test-tight",
    "makespan-det-lb",
    "makespan-rand-lb",
)


@dataclass(frozen=True)
class FamilySpec:
    """Parameters selecting one member of a named instance family.

    Only the parameters a family uses are read; the rest keep their
    defaults.  ``big`` is the "large enough not to matter" upper bound of
    the two-set family and defaults to ``10 * beta * n * (1 + eps)``.
    """

    name: str
    n: int = 1
    m: int = 1
    eps: float = 1e-4
    lam: float = 2.0
    beta: float = 2.0
    big: float | None = None

    def __post_init__(self) -> None:
        if self.name not in FAMILY_NAMES:
            raise FamilyError(f"unknown family {self.name!r}; choose from {FAMILY_NAMES}")
        if self.n < 1 or self.m < 1:
            raise FamilyError("family sizes must be >= 1")
        if not self.eps > 0.0:
            raise FamilyError("eps must be > 0")
        if not self.lam >= 1.0:
            raise FamilyError("lam must be >= 1")
        if not self.beta >= 1.0:
            raise FamilyError("beta must be >= 1")


def make_family(spec: FamilySpec) -> list[Job]:
    """Materialize a family member as a static instance."""
    name = spec.name
    if name == "lb3":
        # n identical jobs whose tests are barely cheaper than their runs:
        # the all-testing scheduler front-loads n tests it never needed.
        if not spec.eps < 1.0:
            raise FamilyError("lb3 requires eps < 1")
        return [Job(i, 1.0, 1.0 - spec.eps, 1.0) for i in range(spec.n)]
    if name == "high-alpha":
        # One job that must be tested; skipping the test costs a factor 2.
        return [Job(0, 2.0, 1.0, 0.0)]
    if name == "high-beta":
        # Testing reveals nothing useful (p == u), so deferred executions
        # pay the full test block first.
        return [Job(i, 2.0, 1.0, 2.0) for i in range(spec.n)]
    if name == "two-sets":
        # n medium jobs with useless tests followed by m huge-bound jobs
        # whose tests are stretched behind the medium executions.
        if not spec.eps < 1.0:
            raise FamilyError("two-sets requires eps < 1")
        big = spec.big if spec.big is not None else 10.0 * spec.beta * spec.n * (1.0 + spec.eps)
        if big < spec.beta:
            raise FamilyError("two-sets requires big >= beta")
        jobs = [Job(i, spec.beta, 1.0 - spec.eps, spec.beta) for i in range(spec.n)]
        jobs += [Job(spec.n + k, big, 1.0 + spec.eps, 0.0) for k in range(spec.m)]
        return jobs
    if name == "ratio-trap":
        # m small jobs just over the ratio threshold lam plus one huge job
        # just under it; any policy that serves small ratios first stalls
        # everything behind the huge job.
        trap_test = spec.m**2 / spec.lam + spec.eps
        jobs = [Job(i, spec.lam, 1.0, spec.lam) for i in range(spec.m)]
        jobs.append(Job(spec.m, float(spec.m**2), trap_test, 0.0))
        return jobs
    if name == "grr-tight":
        # Unit jobs with test time 1/phi: the sharing scheduler tests all
        # of them and every job drags to the very end.
        return [Job(i, 1.0, 1.0 / GOLDEN_RATIO, 1.0) for i in range(spec.n)]
    if name == "force-test-tight":
        # Large bounds, zero processing: the forced test block alone costs
        # twice the optimum.
        u = spec.big if spec.big is not None else float(max(2, spec.n))
        if u < 2.0:
            raise FamilyError("force-test-tight requires big >= 2")
        return [Job(i, u, 1.0, 0.0) for i in range(spec.n)]
    if name == "makespan-det-lb":
        # Single job at the golden threshold; p == u punishes the tester.
        return [Job(0, GOLDEN_RATIO, 1.0, GOLDEN_RATIO)]
    if name == "makespan-rand-lb":
        # Single job u=2, t=1 whose two adversary responses p in {0, 2}
        # equalize every strategy; materialized with the p = u response.
        return [Job(0, 2.0, 1.0, 2.0)]
    raise FamilyError(f"unknown family {name!r}")


class AdaptiveAdversary(InstanceOracle):
    """Oracle that fixes processing times in reaction to commitments.

    All jobs share test time 1 and upper bound ``u_bar``.  A job committed
    untested gets processing time 0.  A tested job gets ``u_bar`` while the
    commitment ordinal (counting both kinds) is still within the first
    ``delta * n`` decisions, and 0 afterwards.  Decisions are frozen: the
    memoized reveal in the base class makes retraction impossible.
    """

    def __init__(self, n: int, u_bar: float = 2.0, delta: float = 0.5):
        if n < 1:
            raise ValueError("n must be >= 1")
        if not u_bar >= 1.0:
            raise ValueError(f"u_bar must be >= 1, got {u_bar}")
        if not 0.0 <= delta <= 1.0:
            raise ValueError(f"delta must be in [0, 1], got {delta}")
        super().__init__([JobView(i, u_bar, 1.0) for i in range(n)])
        self.u_bar = u_bar
        self.delta = delta

    def _decide(self, job_id: int, was_tested: bool) -> float:
        # decided_count already includes this commitment, so the first
        # floor(delta * n) decisions are the punishable ones.
        if was_tested and self.decided_count <= self.delta * self.n:
            return self.u_bar
        return 0.0


PROFILES = ("uniform", "heavy_ratio", "near_threshold")

# Ratio centers the near_threshold profile hugs: the classification
# boundaries of the deterministic, preemptive, and makespan rules.
_THRESHOLD_CENTERS = (1.0, GOLDEN_RATIO, 2.0)


def random_instance(n: int, u_max: float, seed: int | tuple[int, ...], profile: str = "uniform") -> list[Job]:
    """Seeded random instance; ``0 <= p <= u`` holds by construction.

    ``uniform`` draws u, t independently on (0, u_max].  ``heavy_ratio``
    draws the ratio u/t from a heavy-tailed law so a few tests are nearly
    free.  ``near_threshold`` keeps u/t within 0.1 of one of the
    classification thresholds {1, phi, 2}.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not u_max > 0.0:
        raise ValueError("u_max must be > 0")
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; choose from {PROFILES}")
    rng = np.random.default_rng(seed)
    u = (1.0 - rng.random(n)) * u_max
    if profile == "uniform":
        t = (1.0 - rng.random(n)) * u_max
    elif profile == "heavy_ratio":
        ratio = (1.0 - rng.random(n)) ** -1.5
        t = u / ratio
    else:
        centers = rng.choice(_THRESHOLD_CENTERS, size=n)
        ratio = centers + rng.uniform(-0.1, 0.1, size=n)
        t = u / ratio
    p = (1.0 - rng.random(n)) * u
    return [Job(i, float(u[i]), float(t[i]), float(p[i])) for i in range(n)]


def smallest_ratio_first(oracle: InstanceOracle) -> list[ScheduleEvent]:
    """Straw-man policy: serve the uniquely smallest-ratio job first, untested.

    Demonstrates why "small u/t goes first" is not a safe opening move:
    on the ratio-trap family its ratio grows without bound.  Requires an
    instance with a unique minimum-ratio job; everything else then runs
    untested in ascending upper bound.  Excluded from the bounded-ratio
    suites by construction.
    """
    views = oracle.jobs
    ratios = sorted(views, key=lambda v: (v.ratio, v.id))
    if len(ratios) < 2 or not ratios[0].ratio < ratios[1].ratio:
        raise FamilyError("smallest_ratio_first needs a unique smallest-ratio job")
    trap = ratios[0]
    clock = 0.0
    events = []
    oracle.run_untested(trap.id)
    events.append(ScheduleEvent(trap.id, EventKind.UNTESTED_RUN, clock, clock + trap.u))
    clock += trap.u
    rest = sorted((v for v in views if v.id != trap.id), key=lambda v: (v.u, v.id))
    for view in rest:
        oracle.run_untested(view.id)
        events.append(ScheduleEvent(view.id, EventKind.UNTESTED_RUN, clock, clock + view.u))
        clock += view.u
    return events
