"""Le Roy type Mittag-Leffler functions: evaluation, theorem certificates and
numerical geometric verification on the unit disk."""

from leroyatlas.criteria import THEOREM_IDS, Certificate, Clause, check, check_ozaki_close_to_convex, derived_constants
from leroyatlas.disk import (
    GridSpec,
    VerificationReport,
    cross_validate,
    estimate_radius,
    verify_bound,
    verify_close_to_convex,
    verify_conclusion,
    verify_convex,
    verify_exp_convex,
    verify_exp_starlike,
    verify_exp_subordination,
    verify_growth_inequality,
    verify_starlike,
)
from leroyatlas.errors import (
    ArityError,
    BranchGuardError,
    ConvergenceError,
    DomainError,
    GammaOverflowError,
    LeRoyError,
    NormalizationError,
    PoleError,
)
from leroyatlas.series import (
    CoefficientKind,
    LeRoyParams,
    SeriesValue,
    coefficient,
    coefficient_monotone,
    evaluate,
    evaluate_derivative,
    evaluate_many,
    evaluate_normalized,
    theta,
)
from leroyatlas.special import CONSTANTS, digamma, gamma, log_gamma

__version__ = "0.1.0"

__all__ = [
    "CONSTANTS", "THEOREM_IDS", "ArityError", "BranchGuardError", "Certificate", "Clause", "CoefficientKind",
    "ConvergenceError", "DomainError", "GammaOverflowError", "GridSpec", "LeRoyError", "LeRoyParams",
    "NormalizationError", "PoleError", "SeriesValue", "VerificationReport", "check",
    "check_ozaki_close_to_convex", "coefficient", "coefficient_monotone", "cross_validate", "derived_constants",
    "digamma", "estimate_radius", "evaluate", "evaluate_derivative", "evaluate_many", "evaluate_normalized",
    "gamma", "log_gamma", "theta", "verify_bound", "verify_close_to_convex", "verify_conclusion",
    "verify_convex", "verify_exp_convex", "verify_exp_starlike", "verify_exp_subordination",
    "verify_growth_inequality", "verify_starlike",
]
