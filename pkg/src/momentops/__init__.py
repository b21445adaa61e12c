"""Moment-kernel operators on [0, 1): application, classification, profiles.

The package realizes three operator families built from the power moments of
a positive finite measure on [0, 1) (a Hankel form on Taylor coefficients,
its Cauchy-kernel integral companion, and a summatory variant), together
with numeric criteria deciding where they act boundedly, compactly or
nuclearly on weighted sup-norm and coefficient sequence spaces.
"""

from .criteria import (CarlesonResult, ClassificationReport, DecayFit,
                       LimitDecision, NuclearBound, ProfileCurve,
                       RowNormSummary, SummabilityResult, Verdict,
                       boundedness_profile, carleson_check, classify_growth,
                       compactness_limit, dyadic_summability,
                       hankel_section_svd, lpq_row_norms, moment_decay_fit,
                       moment_summability, nuclear_bound_wiener)
from .estimators import CesaroTransformer, GrowthSpaceClassifier, \
    HankelTransformer
from .exceptions import (ConfigurationError, DomainError,
                         NotWellDefinedError, QuadratureError)
from .measures import (DEFAULT_TRUNCATION, Measure, MomentSequence,
                       moment_invariant_violations)
from .operators import (AbelResult, HankelSection, abel_sum, cesaro_apply,
                        hankel_section, hilbert_apply, hilbert_apply_fast,
                        hilbert_coeff_via_abel, integral_apply,
                        taylor_from_disc_samples)
from .quadrature import GradedIntegral
from .solid import (BlockNormProfile, MappingCheck, hull_mapping_check,
                    solid_core_norm, solid_hull_norm)
from .spaces import (RadialGrid, TaylorPolynomial, Weight, growth_witness,
                     lp_norm, weighted_sup_norm)

__version__ = "0.1.0"

__all__ = [
    "AbelResult", "BlockNormProfile", "CarlesonResult", "CesaroTransformer",
    "ClassificationReport", "ConfigurationError", "DEFAULT_TRUNCATION",
    "DecayFit", "DomainError", "GradedIntegral", "GrowthSpaceClassifier",
    "HankelSection", "HankelTransformer", "LimitDecision", "MappingCheck",
    "Measure", "MomentSequence", "NotWellDefinedError", "NuclearBound",
    "ProfileCurve", "QuadratureError", "RadialGrid", "RowNormSummary",
    "SummabilityResult", "TaylorPolynomial", "Verdict", "Weight",
    "abel_sum", "boundedness_profile", "carleson_check", "cesaro_apply",
    "classify_growth", "compactness_limit", "dyadic_summability",
    "growth_witness", "hankel_section", "hankel_section_svd",
    "hilbert_apply", "hilbert_apply_fast", "hilbert_coeff_via_abel",
    "hull_mapping_check", "integral_apply", "lp_norm", "lpq_row_norms",
    "moment_decay_fit", "moment_invariant_violations", "moment_summability",
    "nuclear_bound_wiener", "solid_core_norm", "solid_hull_norm",
    "taylor_from_disc_samples", "weighted_sup_norm",
]
