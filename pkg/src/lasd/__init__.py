"""Dominance tests for distributions of policy-induced gains and losses.

The package tests whether one policy's distribution of individual gains and
losses is preferred to another's by every social planner who aggregates a
nondecreasing, loss-averse value function.  It covers the fully observed
two-sample case, a partially identified three-sample case built on
distributional bounds for treatment effects, first-order dominance variants,
and a Monte Carlo harness for size and power studies.
"""

from .bootstrap import (
    ALL_KINDS,
    BootstrapConfig,
    BootstrapDistribution,
    TestReport,
    default_reps,
    resample_partial_processes,
    resample_point_processes,
    resampled_v3_stat,
    resampled_v_stat,
    resampled_w3_stat,
    resampled_w_stat,
    run_fosd_family,
    run_partial_family,
    run_point_family,
    run_test,
)
from .contact import (
    SetEstimate,
    TuningSequences,
    contact_set_partial,
    contact_sets_point,
    default_tuning,
    eps_maximizer_sets_partial,
    eps_maximizer_sets_point,
)
from .criterion import (
    CriterionEval,
    DiscreteDistribution,
    GridMismatchError,
    LasdCheck,
    ValueFunction,
    ValueFunctionError,
    check_lasd_exact,
    criterion_eval,
    evaluate_svf,
    fosd_process,
    mean_gap,
    named_value_functions,
    t1_process,
    t2_process,
)
from .ecdf import (
    EmpiricalCdf,
    EvaluationSet,
    Sample,
    StepFunction,
    build_ecdf,
    build_evaluation_set,
    left_limit,
    tie_fraction,
)
from .makarov import (
    BoundPair,
    Grid2D,
    build_grid2d,
    bound_functions,
    makarov_lower,
    makarov_upper,
    status_quo_bound_check,
    t3_process,
)
from .simulate import (
    RejectionTable,
    ScenarioSpec,
    gen_normal_partial,
    gen_normal_point,
    gen_triangular,
    run_scenario,
)
from .statistics import (
    StatisticValue,
    fosd_cvm_stat,
    fosd_ks_stat,
    v1_stat,
    v2_stat,
    v3_stat,
    w1_stat,
    w2_stat,
    w3_stat,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_KINDS",
    "BootstrapConfig",
    "BootstrapDistribution",
    "BoundPair",
    "CriterionEval",
    "DiscreteDistribution",
    "EmpiricalCdf",
    "EvaluationSet",
    "Grid2D",
    "GridMismatchError",
    "LasdCheck",
    "RejectionTable",
    "Sample",
    "ScenarioSpec",
    "SetEstimate",
    "StatisticValue",
    "StepFunction",
    "TestReport",
    "TuningSequences",
    "ValueFunction",
    "ValueFunctionError",
    "bound_functions",
    "build_ecdf",
    "build_evaluation_set",
    "build_grid2d",
    "check_lasd_exact",
    "contact_set_partial",
    "contact_sets_point",
    "criterion_eval",
    "default_reps",
    "default_tuning",
    "eps_maximizer_sets_partial",
    "eps_maximizer_sets_point",
    "evaluate_svf",
    "fosd_cvm_stat",
    "fosd_ks_stat",
    "fosd_process",
    "gen_normal_partial",
    "gen_normal_point",
    "gen_triangular",
    "left_limit",
    "makarov_lower",
    "makarov_upper",
    "mean_gap",
    "named_value_functions",
    "resample_partial_processes",
    "resample_point_processes",
    "resampled_v3_stat",
    "resampled_v_stat",
    "resampled_w3_stat",
    "resampled_w_stat",
    "run_fosd_family",
    "run_partial_family",
    "run_point_family",
    "run_scenario",
    "run_test",
    "status_quo_bound_check",
    "t1_process",
    "t2_process",
    "t3_process",
    "tie_fraction",
    "v1_stat",
    "v2_stat",
    "v3_stat",
    "w1_stat",
    "w2_stat",
    "w3_stat",
    "__version__",
]
