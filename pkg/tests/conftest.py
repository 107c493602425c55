"""Shared helpers for the test suite."""

from __future__ import annotations

import pytest

from schedtest.adversaries import PROFILES, random_instance
from schedtest.core import Job, StaticOracle, outcome_from_schedule


def run_outcome(builder, jobs):
    """Run an algorithm builder on a fresh oracle over ``jobs`` and score it."""
    oracle = StaticOracle(jobs)
    events = builder(oracle)
    return outcome_from_schedule(events, oracle), oracle, events


def mixed_battery(count: int, max_n: int, seed_tag: int, u_max: float = 10.0):
    """Deterministic battery of random instances cycling the three profiles."""
    out = []
    for i in range(count):
        n = 1 + (i * 7919) % max_n
        out.append(random_instance(n, u_max, (seed_tag, i), PROFILES[i % len(PROFILES)]))
    return out


def unit_test_variant(jobs):
    """The same instance with every test time forced to one unit."""
    return [Job(j.id, j.u, 1.0, j.p) for j in jobs]


@pytest.fixture(scope="session")
def beta_search_result():
    from schedtest.analysis import optimize_beta

    return optimize_beta()
