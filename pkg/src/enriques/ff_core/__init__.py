"""Exact arithmetic: finite fields, coefficient rings, sparse polynomials."""

from .fields import FieldElement, FieldError, FiniteField, is_irreducible, is_prime, make_field
from .polynomial import VARS6, Polynomial, determinant, monomials
from .rings import ZAB, ZZ, PointElement, PointRing, RingError, SymbolicElement, symbolic_reduce

__all__ = [
    "FieldElement",
    "FieldError",
    "FiniteField",
    "PointElement",
    "PointRing",
    "Polynomial",
    "RingError",
    "SymbolicElement",
    "VARS6",
    "ZAB",
    "ZZ",
    "determinant",
    "is_irreducible",
    "is_prime",
    "make_field",
    "monomials",
    "symbolic_reduce",
]
