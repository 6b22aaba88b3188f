"""Transfer-operator spectra of degree-two Blaschke circle maps."""

from ._spectre import (
    ConvergenceError,
    DomainError,
    StructureError,
    T,
    collocation_eigenvalues,
    eigenvalues,
    fixed_point,
    interval_branch,
    interval_spectrum_predicted,
    inverse_branches,
    lift,
    predicted_spectrum,
    run_cli,
    tau,
    transfer_matrix,
    verify_inverse_problem,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "StructureError",
    "T",
    "collocation_eigenvalues",
    "eigenvalues",
    "fixed_point",
    "interval_branch",
    "interval_spectrum_predicted",
    "inverse_branches",
    "lift",
    "predicted_spectrum",
    "run_cli",
    "tau",
    "transfer_matrix",
    "verify_inverse_problem",
]
