"""Exact scalars and truncated formal series shared by every other module."""

from fractions import Fraction

from .cyclotomic import (Cyclotomic, Rational, as_level, common_level, cyclotomic_inverse,
                         cyclotomic_mul, cyclotomic_polynomial, format_rational, format_scalar)
from .linalg import solve_exact
from .multiseries import MultiSeries, multiseries_mul
from .poly import Poly
from .series import PrecisionError, TruncatedSeries, expand_quotient

__all__ = [
    "Cyclotomic", "Fraction", "MultiSeries", "Poly", "PrecisionError", "Rational",
    "TruncatedSeries", "as_level", "common_level", "cyclotomic_inverse", "cyclotomic_mul",
    "cyclotomic_polynomial", "expand_quotient", "format_rational", "format_scalar",
    "multiseries_mul", "solve_exact",
]
