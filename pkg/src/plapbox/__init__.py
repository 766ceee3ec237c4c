"""Box constants, radial solves, and ordered sub/super-solution pairs
for Dirichlet problems driven by the weighted p-Laplacian with
gradient-dependent nonlinearities.

The hot quadrature kernels run through numba by default; set
``PLAPBOX_BACKEND=numpy`` for the pure-numpy fallback.
"""

from ._kernels import BACKEND
from .constants import (
    CertificationError,
    DomainSummary,
    InvalidWeightError,
    PayneReport,
    ProblemConstants,
    c_np,
    compute_constants,
    gamma_ball_closed,
    gamma_of_ball,
    k1_ball_closed,
    k1_of_ball,
    k2_ball_closed,
    k2_of_ball,
    lambda_inf_k2,
    payne_philippin_check,
    select_rho,
    torsion_profile,
    torsion_profile_closed,
)
from .grids import (
    DEFAULT_GRID_N,
    PExponent,
    RadialGrid,
    as_exponent,
    phi_p,
    phi_q,
    prefix_integral,
    prefix_value_at,
    suffix_integral,
    tail_power_integral,
)
from .hypotheses import (
    HypothesisCheck,
    LambdaFamilyReport,
    analyze_lambda_family,
    check_H1,
    check_H2,
    check_H3,
    eval_G,
    eval_H,
    lambda_family,
)
from .profiles import RadialProfile
from .solver import (
    BoxViolationError,
    BoxY,
    ContractViolationError,
    MembershipReport,
    NonlinearitySpec,
    SolveHistory,
    apply_T,
    build_envelopes,
    check_box_membership,
    residual,
    solve_fixed_point,
)
from .subsuper import (
    PairReport,
    SubSuperPair,
    build_pair,
    build_subsolution,
    build_supersolution,
    supersolution_ode_residual,
    verify_pair,
)
from .weights import (
    AmbientWeight,
    RadialWeight,
    WeightReport,
    direction_set,
    load_weight_csv,
    named_weight,
    symmetrize,
    validate_weight,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DEFAULT_GRID_N",
    "AmbientWeight",
    "BoxViolationError",
    "BoxY",
    "CertificationError",
    "ContractViolationError",
    "DomainSummary",
    "HypothesisCheck",
    "InvalidWeightError",
    "LambdaFamilyReport",
    "MembershipReport",
    "NonlinearitySpec",
    "PExponent",
    "PairReport",
    "PayneReport",
    "ProblemConstants",
    "RadialGrid",
    "RadialProfile",
    "RadialWeight",
    "SolveHistory",
    "SubSuperPair",
    "WeightReport",
    "analyze_lambda_family",
    "apply_T",
    "as_exponent",
    "build_envelopes",
    "build_pair",
    "build_subsolution",
    "build_supersolution",
    "c_np",
    "check_H1",
    "check_H2",
    "check_H3",
    "check_box_membership",
    "compute_constants",
    "direction_set",
    "eval_G",
    "eval_H",
    "gamma_ball_closed",
    "gamma_of_ball",
    "k1_ball_closed",
    "k1_of_ball",
    "k2_ball_closed",
    "k2_of_ball",
    "lambda_family",
    "lambda_inf_k2",
    "load_weight_csv",
    "named_weight",
    "payne_philippin_check",
    "phi_p",
    "phi_q",
    "prefix_integral",
    "prefix_value_at",
    "residual",
    "select_rho",
    "solve_fixed_point",
    "suffix_integral",
    "supersolution_ode_residual",
    "symmetrize",
    "tail_power_integral",
    "torsion_profile",
    "torsion_profile_closed",
    "validate_weight",
    "verify_pair",
]
