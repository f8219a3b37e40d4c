"""Numerical residuals of the identities satisfied by the catalog."""

from .conservation import ConservationReport, ConservedWeight, conservation_check
from .determining import EQUATION_IDS, DeterminingContext, determining_residual, determining_terms
from .pde import invariant_surface_residual, pde_residual, verify_family
from .reduced import (
    ReducedContext,
    ReducedSystemId,
    family_profiles,
    reduced_equations,
    reduced_ode_residual,
    reduction_consistency,
)
from .report import AmbiguityReport, EquationResidual, ResidualReport, SamplingSpec, fmt17

__all__ = [
    "AmbiguityReport",
    "ConservationReport",
    "ConservedWeight",
    "DeterminingContext",
    "EQUATION_IDS",
    "EquationResidual",
    "ReducedContext",
    "ReducedSystemId",
    "ResidualReport",
    "SamplingSpec",
    "conservation_check",
    "determining_residual",
    "determining_terms",
    "family_profiles",
    "fmt17",
    "invariant_surface_residual",
    "pde_residual",
    "reduced_equations",
    "reduced_ode_residual",
    "reduction_consistency",
    "verify_family",
]
