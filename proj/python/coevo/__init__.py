"""Pairwise dominance co-evolution on the Bilinear game."""

from ._coevo import (
    BilinearParams,
    check_suite,
    cli,
    dominates_by_onecounts,
    error_threshold,
    intransitivity_witness,
    payoff_counts,
    results_csv,
    run_experiment,
    run_trial,
    theorem3_bound,
    theorem9_budget,
    theorem9_chi,
    theorem9_delta,
    worst_case_f_count,
)

__all__ = [
    "BilinearParams",
    "check_suite",
    "cli",
    "dominates_by_onecounts",
    "error_threshold",
    "intransitivity_witness",
    "payoff_counts",
    "results_csv",
    "run_experiment",
    "run_trial",
    "theorem3_bound",
    "theorem9_budget",
    "theorem9_chi",
    "theorem9_delta",
    "worst_case_f_count",
]
