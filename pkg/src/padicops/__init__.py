"""Exact finite-scale non-Archimedean operator algebra.

Scalars are p-adic numbers with certified valuations; matrices carry the
ultrametric operator norm; on top sit spectral theory, cyclic harmonic
analysis with Q_p-valued characters, crossed-product algebras, and
residue-field reduction with Baer-type classification.
"""

from .charduals import TruncatedGroup, WeightedSupNorm, trig_poly_approx
from .errors import ConfigInvalid, PadicopsError, PrecisionLoss
from .padic import DEFAULT_PRECISION, PadicScalar, teichmuller_root
from .reduction import BaerReport, FiniteAlgebra, classify_type, is_baer, reduce_algebra
from .spectral import (
    PolynomialOverK,
    SpectralData,
    check_norm_identity,
    is_orthoprojection,
    multiplication_operator,
    normality_scan,
    spectral_projections,
)
from .ultralinalg import KMatrix, MatrixAlgebra, algebra_span, commutant, operator_norm

__version__ = "0.1.0"

__all__ = [
    "BaerReport",
    "ConfigInvalid",
    "DEFAULT_PRECISION",
    "FiniteAlgebra",
    "KMatrix",
    "MatrixAlgebra",
    "PadicScalar",
    "PadicopsError",
    "PolynomialOverK",
    "PrecisionLoss",
    "SpectralData",
    "TruncatedGroup",
    "WeightedSupNorm",
    "algebra_span",
    "check_norm_identity",
    "classify_type",
    "commutant",
    "is_baer",
    "is_orthoprojection",
    "multiplication_operator",
    "normality_scan",
    "operator_norm",
    "reduce_algebra",
    "spectral_projections",
    "teichmuller_root",
    "trig_poly_approx",
    "__version__",
]
