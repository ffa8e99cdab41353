"""Hub-and-spoke mixture model for grouped binary data."""

from ._hubmodel import (
    EnumerationCapError,
    InfeasibleInstanceError,
    InvalidInputError,
    check_identifiability,
    complete_data_log_lik,
    distributions_distinct,
    fit,
    marginal_log_lik,
    mislabel_fraction,
    outcome_distribution,
    profile_log_lik,
    rmse,
    run_replicates,
    simulate,
)

__all__ = [
    "EnumerationCapError",
    "InfeasibleInstanceError",
    "InvalidInputError",
    "check_identifiability",
    "complete_data_log_lik",
    "distributions_distinct",
    "fit",
    "marginal_log_lik",
    "mislabel_fraction",
    "outcome_distribution",
    "profile_log_lik",
    "rmse",
    "run_replicates",
    "simulate",
]

__version__ = "0.1.0"
