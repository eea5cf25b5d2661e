"""Hasse-Witt matrices of hyperelliptic curves for all primes up to N.

The public surface: validate a curve, then either stream records with
iter_hassewitt_records or collect them with compute_hassewitt_matrices.
"""

from .curve import AdmissiblePrimeSet, CurveModel, admissible_primes, validate_curve
from .errors import (CurveError, HasseWittError, NotSquarefree,
                     PrecisionFailure, UnsupportedGenus, ZeroLeading)
from .hassewitt import (HasseWittRecord, compute_hassewitt_matrices,
                        iter_hassewitt_records, naive_hassewitt, point_count)

__all__ = [
    "AdmissiblePrimeSet",
    "CurveModel",
    "CurveError",
    "HasseWittError",
    "HasseWittRecord",
    "NotSquarefree",
    "PrecisionFailure",
    "UnsupportedGenus",
    "ZeroLeading",
    "admissible_primes",
    "compute_hassewitt_matrices",
    "iter_hassewitt_records",
    "naive_hassewitt",
    "point_count",
    "validate_curve",
]

__version__ = "1.0.0"
