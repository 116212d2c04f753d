"""Dirichlet-to-Neumann realization of the fractional wave operator.

The closed-form route works mode by mode in Laplace-Fourier variables; the
time-domain route marches the degenerate extension problem and fits the
boundary expansion.
"""

from .closed_form import (
    ExtensionProfile,
    LaplaceLine,
    NeumannEstimate,
    default_eps,
    dtn_multiplier,
    dtn_spacetime,
    dtn_spacetime_extrapolated,
    neumann_extract_detailed,
    neumann_extract_profile,
    profile_derivative,
    profile_eval,
)
from .energy import EnergyReport, RayProfile, energy_check, energy_constant, mode_energy
from .solver import (
    BoundaryFit,
    FreeEvolution,
    SolverGrid,
    TimeDomainSolution,
    boundary_fit_extract,
    dtn_time_domain,
    free_evolution,
    solve_time_domain,
    weighted_energy,
)

__all__ = [
    "BoundaryFit",
    "EnergyReport",
    "ExtensionProfile",
    "FreeEvolution",
    "LaplaceLine",
    "NeumannEstimate",
    "RayProfile",
    "SolverGrid",
    "TimeDomainSolution",
    "boundary_fit_extract",
    "default_eps",
    "dtn_multiplier",
    "dtn_spacetime",
    "dtn_spacetime_extrapolated",
    "dtn_time_domain",
    "energy_check",
    "energy_constant",
    "free_evolution",
    "mode_energy",
    "neumann_extract_detailed",
    "neumann_extract_profile",
    "profile_derivative",
    "profile_eval",
    "solve_time_domain",
    "weighted_energy",
]
