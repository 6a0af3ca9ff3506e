from fractions import Fraction

import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from affnorm.polyring import PolyRing, Polynomial

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def polynomials(ring: PolyRing, max_degree: int = 3, max_terms: int = 4, coeffs=(-5, 5)):
    """Hypothesis strategy for small polynomials in ring."""
    n = ring.nvars
    exps = st.lists(st.integers(0, max_degree), min_size=n, max_size=n).map(
        lambda e: _cap(e, max_degree))
    terms = st.dictionaries(exps, st.integers(*coeffs), max_size=max_terms)
    return terms.map(lambda d: ring.from_dict(d))


def _cap(exps, bound):
    out, left = [], bound
    for e in exps:
        out.append(min(e, left))
        left -= out[-1]
    return tuple(out)


def to_sympy(f: Polynomial):
    syms = sympy.symbols(f.ring.names)
    expr = sympy.Integer(0)
    for exps, c in f.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for s, e in zip(syms, exps):
            term *= s ** e
        expr += term
    return sympy.expand(expr)


def from_sympy(expr, ring: PolyRing) -> Polynomial:
    syms = sympy.symbols(ring.names)
    poly = sympy.Poly(sympy.expand(expr), *syms)
    return ring.from_dict({m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})
