"""Extremal houses of reciprocal algebraic integers: exact polynomials, certified
roots, irreducibility gates, closed-form bounds, exhaustive search and a
verification harness for the embedded record tables."""

from .poly import IntPolynomial, parse_poly

__all__ = ["IntPolynomial", "parse_poly"]
__version__ = "0.1.0"
