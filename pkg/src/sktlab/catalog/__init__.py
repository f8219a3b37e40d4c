"""Symmetry operators, reduced profiles and exact solution families."""

from .ansatz import (
    AnsatzRow,
    AnsatzSolution,
    Case8Solution,
    ansatz_jet,
    ansatz_operator,
    case2_constant_solution,
    q8_solution,
)
from .families import (
    AdmissibilityReport,
    FamilyTag,
    MappedSolution,
    SolutionFamily,
    admissible_domain,
    case9_params,
    eval_solution,
    eval_solution_jet,
    paired_operators,
    polymer_params,
)
from .functions import eval_f, f_jet, harmonic
from .jets import Jet2, XJet
from .operators import CoefficientBundle, OperatorKind, SymmetryOperator, domain_mask, operator_coefficients
from .profiles import (
    Case1Profiles,
    ReducedProfile,
    build_case1_profiles,
    case9_exp_profiles,
    case9_f0_profiles,
    case9_phi0_profiles,
    polymer_profiles,
)

__all__ = [
    "AdmissibilityReport",
    "AnsatzRow",
    "AnsatzSolution",
    "Case1Profiles",
    "Case8Solution",
    "CoefficientBundle",
    "FamilyTag",
    "Jet2",
    "MappedSolution",
    "OperatorKind",
    "ReducedProfile",
    "SolutionFamily",
    "SymmetryOperator",
    "XJet",
    "admissible_domain",
    "ansatz_jet",
    "ansatz_operator",
    "build_case1_profiles",
    "case2_constant_solution",
    "case9_exp_profiles",
    "case9_f0_profiles",
    "case9_params",
    "case9_phi0_profiles",
    "domain_mask",
    "eval_f",
    "eval_solution",
    "eval_solution_jet",
    "f_jet",
    "harmonic",
    "operator_coefficients",
    "paired_operators",
    "polymer_params",
    "polymer_profiles",
    "q8_solution",
]
