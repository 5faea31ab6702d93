"""Kuelbs-Steadman and related norms for finite atomic vector measures."""

from .integration import (
    BUILTIN_INTEGRANDS,
    HKConvergenceError,
    HKResult,
    alexiewicz_norm,
    builtin_integrand,
    hk_integrate,
    kl_integral_simple,
    lebesgue_atomic,
)
from .measures import (
    ApproximationWarning,
    BudgetError,
    DenseFamily,
    ScalarMeasure,
    VectorMeasure,
    build_family,
    check_mu_dense,
    mset,
    scalarize,
    semivariation,
    variation,
)
from .norms import (
    NormResult,
    hkl_norm,
    ks2_inner,
    ksp_norm,
    ksp_weak_norm,
    lp_norm,
    weighted_minkowski,
    weighted_power_bound,
)
from .spaces import (
    DualCandidateSet,
    NormTag,
    Provenance,
    SpaceDesc,
    build_candidates,
    explicit_candidates,
    norming_functional,
)
from .specfile import MeasureSpec, SpecError, load_spec, parse_spec
from .verify import SuiteConfig, SuiteReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_INTEGRANDS",
    "HKConvergenceError",
    "HKResult",
    "alexiewicz_norm",
    "builtin_integrand",
    "hk_integrate",
    "kl_integral_simple",
    "lebesgue_atomic",
    "ApproximationWarning",
    "BudgetError",
    "DenseFamily",
    "ScalarMeasure",
    "VectorMeasure",
    "build_family",
    "check_mu_dense",
    "mset",
    "scalarize",
    "semivariation",
    "variation",
    "NormResult",
    "hkl_norm",
    "ks2_inner",
    "ksp_norm",
    "ksp_weak_norm",
    "lp_norm",
    "weighted_minkowski",
    "weighted_power_bound",
    "DualCandidateSet",
    "NormTag",
    "Provenance",
    "SpaceDesc",
    "build_candidates",
    "explicit_candidates",
    "norming_functional",
    "MeasureSpec",
    "SpecError",
    "load_spec",
    "parse_spec",
    "SuiteConfig",
    "SuiteReport",
    "run_suite",
]
