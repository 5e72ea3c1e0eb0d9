"""Quartic large sieve machinery: Z[i] arithmetic, quartic symbols, Gauss sums,
primitive quartic characters, smoothed sums and an empirical sieve harness."""

from .gaussian import GaussianInteger, factor, format_gaussian, gcd, is_primary, parse_gaussian
from .symbol import InvalidModulus, QuarticSymbolValue, chi_eval, quartic_symbol, reciprocity_sign

__version__ = "0.1.0"

__all__ = [
    "GaussianInteger",
    "InvalidModulus",
    "QuarticSymbolValue",
    "chi_eval",
    "factor",
    "format_gaussian",
    "gcd",
    "is_primary",
    "parse_gaussian",
    "quartic_symbol",
    "reciprocity_sign",
]
