"""GSAV exponential integrators for Allen-Cahn flows on uniform 2D grids.

Grid functions are (M, M) float arrays indexed [i, j] with i along x.
"""

from ._gsav import (
    DIAGNOSTICS_HEADER,
    ContractViolation,
    DomainError,
    GridSpec,
    NumericError,
    Potential,
    SchemeConfig,
    Sigma,
    SolverState,
    VerificationFailure,
    converge,
    init_random,
    init_sine,
    laplacian,
    modified_energy,
    reference_solution,
    run,
    step,
    total_energy,
    verify,
)

__all__ = [
    "DIAGNOSTICS_HEADER",
    "ContractViolation",
    "DomainError",
    "GridSpec",
    "NumericError",
    "Potential",
    "SchemeConfig",
    "Sigma",
    "SolverState",
    "VerificationFailure",
    "converge",
    "init_random",
    "init_sine",
    "laplacian",
    "modified_energy",
    "reference_solution",
    "run",
    "step",
    "total_energy",
    "verify",
]
