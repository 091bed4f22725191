"""Graded commutative algebra over F_p with a theorem-check harness."""

__version__ = "0.1.0"

from .errors import CAError
from .polycore import PolyRing, Polynomial, PrimeField, parse_poly, format_poly
from .groebner import Ideal
from .modcalc import FgModule, FreeComplex, QuotientRing, Resolution

__all__ = [
    "CAError",
    "FgModule",
    "FreeComplex",
    "Ideal",
    "PolyRing",
    "Polynomial",
    "PrimeField",
    "QuotientRing",
    "Resolution",
    "format_poly",
    "parse_poly",
]
