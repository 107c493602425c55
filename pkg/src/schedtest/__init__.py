"""Single-machine scheduling with testable jobs.

Schedulers that decide online whether to test a job (revealing its true
processing time) or run it for its upper bound, plus the adversarial
instance families, brute-force optima, and worst-case ratio analysis used
to evaluate them.
"""

from .core import (
    GOLDEN_RATIO,
    InstanceOracle,
    Job,
    JobView,
    Outcome,
    ScheduleEvent,
    EventKind,
    StaticOracle,
    opt_makespan,
    opt_sum_completion,
    optimal_runtime,
    outcome_from_schedule,
    read_instance_csv,
    write_events_csv,
    write_instance_csv,
)
from .algorithms import (
    alpha_beta_sort,
    force_testing,
    golden_round_robin,
    makespan_deterministic,
    makespan_randomized,
    makespan_test_probability,
    processor_sharing_completions,
    randomized_sort,
    sort_test_probability,
    capped_test_probability,
)
from .adversaries import (
    AdaptiveAdversary,
    FamilySpec,
    make_family,
    random_instance,
    smallest_ratio_first,
)
from .analysis import (
    MinMaxResult,
    TrialStats,
    contribution_audit,
    f_alpha_beta,
    lambda_branches,
    minimize_f_grid,
    monte_carlo,
    optimize_beta,
    worst_ratio,
)
from .bruteforce import BruteForceResult, brute_opt_makespan, brute_opt_sum

__all__ = [
    "GOLDEN_RATIO",
    "AdaptiveAdversary",
    "BruteForceResult",
    "EventKind",
    "FamilySpec",
    "InstanceOracle",
    "Job",
    "JobView",
    "MinMaxResult",
    "Outcome",
    "ScheduleEvent",
    "StaticOracle",
    "TrialStats",
    "alpha_beta_sort",
    "brute_opt_makespan",
    "brute_opt_sum",
    "contribution_audit",
    "f_alpha_beta",
    "force_testing",
    "golden_round_robin",
    "lambda_branches",
    "make_family",
    "makespan_deterministic",
    "makespan_randomized",
    "makespan_test_probability",
    "minimize_f_grid",
    "monte_carlo",
    "opt_makespan",
    "opt_sum_completion",
    "optimal_runtime",
    "optimize_beta",
    "outcome_from_schedule",
    "processor_sharing_completions",
    "random_instance",
    "randomized_sort",
    "sort_test_probability",
    "read_instance_csv",
    "smallest_ratio_first",
    "capped_test_probability",
    "worst_ratio",
    "write_events_csv",
    "write_instance_csv",
]
