"""Normalization of affine rings over QQ and integral closure of ideals."""

from .ideals import Ideal, QuotientRing, radical
from .normalize import ic_fractions, normalize_ring
from .polyring import (Fraction, MonomialOrder, PolyRing, Polynomial, Rational, RingMap,
                       compare_monomials, partial_derivative)
from .rees import blowup, ideal_integral_closure

__all__ = ["Fraction", "Ideal", "MonomialOrder", "PolyRing", "Polynomial", "QuotientRing",
           "Rational", "RingMap", "blowup", "compare_monomials", "ic_fractions",
           "ideal_integral_closure", "normalize_ring", "partial_derivative", "radical"]
__version__ = "0.1.0"
