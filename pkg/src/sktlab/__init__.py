"""Numerical laboratory for the simplified SKT cross-diffusion system."""

from .errors import (
    ConfigError,
    DomainError,
    EmptySampleError,
    ParameterError,
    ShapeError,
    SktError,
    TransformError,
)
from .model import (
    CASES,
    CaseEntry,
    Scenario,
    SktParams,
    TransformId,
    VarMap,
    apply_named_transform,
    classify_scenario,
    reaction_terms,
    validate_params,
)

__version__ = "0.1.0"

__all__ = [
    "CASES",
    "CaseEntry",
    "ConfigError",
    "DomainError",
    "EmptySampleError",
    "ParameterError",
    "Scenario",
    "ShapeError",
    "SktError",
    "SktParams",
    "TransformError",
    "TransformId",
    "VarMap",
    "__version__",
    "apply_named_transform",
    "classify_scenario",
    "reaction_terms",
    "validate_params",
]
