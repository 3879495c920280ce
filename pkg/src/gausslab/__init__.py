"""Exact twisted Gauss sums over finite fields.

Builds finite-field towers with discrete-log tables, computes Gauss sums and
twisted gamma factors exactly in cyclotomic integer rings, verifies the
Stickelberger valuation and the Gross-Koblitz factorization in a ramified
p-adic ring, runs converse-theorem signature scans, and cross-checks the
n x 1 gamma-factor formula against a GL2 Bessel-function oracle.
"""

__version__ = "0.1.0"

from .errors import (
    ArgumentError,
    FormulaValidationError,
    GausslabError,
    PrecisionError,
    PrimalityError,
    ResourceCapError,
)
from .ff import EtaleAlgebra, FieldTower, build_etale, build_tower

__all__ = [
    "ArgumentError",
    "EtaleAlgebra",
    "FieldTower",
    "FormulaValidationError",
    "GausslabError",
    "PrecisionError",
    "PrimalityError",
    "ResourceCapError",
    "build_etale",
    "build_tower",
    "__version__",
]
