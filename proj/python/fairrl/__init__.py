"""Fairness-aware multi-agent RL: occupancy solver, posterior sampling,
objectives, and environments, backed by the C++ core."""

from ._core import (
    DimensionMismatch,
    DirichletPosterior,
    DomainError,
    InfeasibleProjection,
    NonErgodicChain,
    ObjectiveFunction,
    OccupancyMeasure,
    PolicyEvaluation,
    SolveResult,
    SolverConfig,
    TabularMdp,
    TabularPolicy,
    extract_policy,
    pareto_dominates,
    project_feasible,
    qoe,
    run_model_based_mdp,
    running_fairness,
    sample_kernel,
    solve_occupancy,
    steady_state,
    verify_pareto_front,
)

__all__ = [
    "DimensionMismatch",
    "DirichletPosterior",
    "DomainError",
    "InfeasibleProjection",
    "NonErgodicChain",
    "ObjectiveFunction",
    "OccupancyMeasure",
    "PolicyEvaluation",
    "SolveResult",
    "SolverConfig",
    "TabularMdp",
    "TabularPolicy",
    "extract_policy",
    "pareto_dominates",
    "project_feasible",
    "qoe",
    "run_model_based_mdp",
    "running_fairness",
    "sample_kernel",
    "solve_occupancy",
    "steady_state",
    "verify_pareto_front",
]
