"""Ideals of polynomial rings and of their quotients."""

from __future__ import annotations

import itertools
import logging
from typing import Iterable, Sequence

from . import config
from .errors import CapExceededError, RingMismatchError
from .groebner import GroebnerBasis, eliminate, reduced_groebner
from .polyring import (MonomialOrder, Polynomial, PolyRing, Rational, convert,
                       divide_exact, partial_derivative)

log = logging.getLogger(__name__)


def _fresh_name(ring: PolyRing, base: str = "t") -> str:
    name = f"_{base}"
    while name in ring.names:
        name = "_" + name
    return name


class Ideal:
    """Ideal of a polynomial ring, with a lazily computed reduced Groebner basis."""

    def __init__(self, ring: PolyRing, gens: Iterable = (), gb: GroebnerBasis | None = None):
        self.ring = ring
        out = []
        for g in gens:
            g = ring(g)
            if g.ring != ring:
                raise RingMismatchError(f"{g.ring} vs {ring}")
            if g:
                out.append(g)
        self.gens: list[Polynomial] = out
        self._gb = gb

    @classmethod
    def from_gb(cls, gb: GroebnerBasis) -> "Ideal":
        return cls(gb.ring, gb.elements, gb=gb)

    def gb(self) -> GroebnerBasis:
        gb = self._gb
        if gb is None:
            gb = reduced_groebner(self.gens, ring=self.ring) if self.gens \
                else GroebnerBasis(self.ring, [])
            self._gb = gb
        return gb

    def reduce(self, f: Polynomial) -> Polynomial:
        return self.gb().reduce(self.ring(f))

    def contains(self, f) -> bool:
        return self.reduce(f).is_zero()

    def __contains__(self, f) -> bool:
        return self.contains(f)

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.gens)

    def is_unit(self) -> bool:
        return self.gb().is_unit()

    def is_zero(self) -> bool:
        return not self.gens

    def __add__(self, other) -> "Ideal":
        if isinstance(other, Ideal):
            if other.ring != self.ring:
                raise RingMismatchError("sum of ideals in different rings")
            return Ideal(self.ring, self.gens + other.gens)
        return Ideal(self.ring, self.gens + [self.ring(g) for g in other])

    def __mul__(self, other) -> "Ideal":
        if isinstance(other, Ideal):
            return Ideal(self.ring, [a * b for a in self.gens for b in other.gens])
        other = self.ring(other)
        return Ideal(self.ring, [g * other for g in self.gens])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Ideal) and equals(self, other)

    __hash__ = None

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.gens)) or '0'})"

    def __str__(self):
        return "(" + ", ".join(map(str, self.gens)) + ")" if self.gens else "(0)"


def ideal(*gens: Polynomial, ring: PolyRing | None = None) -> Ideal:
    if ring is None:
        ring = gens[0].ring
    return Ideal(ring, gens)


class QuotientRing:
    """ambient / defining; elements are represented by normal forms."""

    def __init__(self, ambient: PolyRing, defining: Ideal | Sequence[Polynomial]):
        if not isinstance(defining, Ideal):
            defining = Ideal(ambient, defining)
        if defining.ring != ambient:
            raise RingMismatchError("defining ideal not in the ambient ring")
        self.ambient = ambient
        self.defining = defining

    def reduce(self, f: Polynomial) -> Polynomial:
        return self.defining.reduce(f)

    def is_zero(self, f: Polynomial) -> bool:
        return self.defining.contains(f)

    def ideal(self, gens: Iterable[Polynomial]) -> Ideal:
        """Preimage in the ambient ring of the ideal generated by gens."""
        return Ideal(self.ambient, list(gens) + self.defining.gens)

    def gens(self) -> list[Polynomial]:
        return self.ambient.gens()

    def __repr__(self):
        return f"{self.ambient}/{self.defining}"


# ---------------------------------------------------------------- basic calculus


def _check(I: Ideal, J: Ideal):
    if I.ring != J.ring:
        raise RingMismatchError(f"{I.ring} vs {J.ring}")


def contains(I: Ideal, f: Polynomial) -> bool:
    if f.ring != I.ring:
        raise RingMismatchError("polynomial not in the ideal's ring")
    return I.contains(f)


def equals(I: Ideal, J: Ideal) -> bool:
    _check(I, J)
    return I.gb().elements == J.gb().elements


def intersect(I: Ideal, J: Ideal) -> Ideal:
    _check(I, J)
    R = I.ring
    if I.is_zero() or J.is_unit():
        return I
    if J.is_zero() or I.is_unit():
        return J
    t = _fresh_name(R)
    S = PolyRing((t,) + R.names, MonomialOrder.eliminate(1), ((1,) + (0,) * (R.degree_width() - 1),)
                 + R.degrees)
    tv = S.gen(0)
    gens = [tv * convert(g, S) for g in I.gens] + [(1 - tv) * convert(g, S) for g in J.gens]
    out = eliminate(gens, [t], target=R, ring=S)
    return Ideal(R, out)


def colon(I: Ideal, J: Ideal) -> Ideal:
    """(I : J) as the intersection of (I : g) over the generators g of J."""
    _check(I, J)
    if J.is_zero():
        raise ValueError("colon by the zero ideal")
    R = I.ring
    result = None
    for g in J.gens:
        if I.contains(g):
            continue
        q = colon_element(I, g)
        result = q if result is None else intersect(result, q)
    return result if result is not None else Ideal(R, [R.one()])


def colon_element(I: Ideal, g: Polynomial) -> Ideal:
    """(I : g) computed as (I intersected with (g)) divided by g."""
    R = I.ring
    if g.is_zero():
        raise ValueError("colon by zero")
    if I.contains(g):
        return Ideal(R, [R.one()])
    if g.is_constant():
        return I
    inter = intersect(I, Ideal(R, [g]))
    return Ideal(R, [divide_exact(h, g) for h in inter.gb().elements])


def saturate(I: Ideal, f: Polynomial, method: str = "rabinowitsch") -> Ideal:
    """(I : f^infinity)."""
    if f.is_zero():
        raise ValueError("saturation by zero")
    R = I.ring
    if f.is_constant() or I.is_zero():
        return I
    if method == "iterate":
        cur = I
        while True:
            nxt = colon_element(cur, f)
            if equals(nxt, cur):
                return cur
            cur = nxt
    t = _fresh_name(R)
    S = PolyRing((t,) + R.names, MonomialOrder.eliminate(1),
                 ((0,) * R.degree_width(),) + R.degrees)
    tv = S.gen(0)
    gens = [convert(g, S) for g in I.gens] + [1 - tv * convert(f, S)]
    return Ideal(R, eliminate(gens, [t], target=R, ring=S))


def independent_set(I: Ideal) -> tuple[int, tuple[int, ...]]:
    """(dimension, a maximal independent variable set) of R/I from the lead ideal."""
    gb = I.gb()
    R = I.ring
    if gb.is_unit():
        return -1, ()
    supports = [frozenset(i for i, e in enumerate(g.lead_monomial()) if e) for g in gb]
    n = R.nvars
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if all(not sup <= s for sup in supports):
                return size, subset
    return 0, ()


def dimension(I: Ideal) -> int:
    return independent_set(I)[0]


# ---------------------------------------------------------------- gcd and squarefree parts


def _univariate_var(f: Polynomial):
    sup = f.support()
    return next(iter(sup)) if len(sup) == 1 else None


def _euclid(a: Polynomial, b: Polynomial) -> Polynomial:
    from .groebner import normal_form_with_lift

    while not b.is_zero():
        a, b = b, normal_form_with_lift(a, [b]).remainder
    return a.monic()


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd; the multivariate case uses lcm = generator of (a) intersected with (b)."""
    if a.ring != b.ring:
        raise RingMismatchError("gcd across rings")
    R = a.ring
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return R.one()
    sa, sb = a.support(), b.support()
    if not sa & sb:
        return R.one()
    if len(sa) == 1 and sa == sb:
        return _euclid(a, b)
    lcm = intersect(Ideal(R, [a]), Ideal(R, [b])).gb().elements
    if len(lcm) != 1:
        raise RuntimeError("intersection of principal ideals is not principal")
    return divide_exact(a * b, lcm[0]).monic()


def poly_gcd_list(polys: Sequence[Polynomial]) -> Polynomial:
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        raise ValueError("gcd of zero polynomials")
    g = polys[0].monic()
    for p in polys[1:]:
        if g.is_constant():
            break
        g = poly_gcd(g, p)
    return g


def squarefree_part(f: Polynomial, variables: Iterable[int] | None = None) -> Polynomial:
    """f / gcd(f, partial derivatives); restricted to some variables if given."""
    if f.is_zero():
        raise ValueError("squarefree part of zero")
    if f.is_constant():
        return f.ring.one()
    idx = sorted(f.support() if variables is None else set(variables) & f.support())
    g = f.monic()
    for i in idx:
        if g.is_constant():
            break
        g = poly_gcd(g, partial_derivative(f, i))
    return divide_exact(f, g).monic() if not g.is_constant() else f.monic()


# ---------------------------------------------------------------- radical


def _min_poly(gb: GroebnerBasis, var: int) -> Polynomial:
    """Minimal polynomial of a variable modulo a zero-dimensional ideal (linear algebra)."""
    R = gb.ring
    x = R.gen(var)
    rows: dict[int, tuple[dict, dict]] = {}
    cur = gb.reduce(R.one())
    k = 0
    while True:
        v = dict(cur.terms)
        comb = {k: Rational(1)}
        while v:
            pk = max(v)
            row = rows.get(pk)
            if row is None:
                break
            rv, rc = row
            c = v[pk] / rv[pk]
            for key, val in rv.items():
                nv = v.get(key, 0) - c * val
                if nv:
                    v[key] = nv
                else:
                    v.pop(key, None)
            for key, val in rc.items():
                nv = comb.get(key, 0) - c * val
                if nv:
                    comb[key] = nv
                else:
                    comb.pop(key, None)
        if not v:
            exps = [0] * R.nvars
            terms = {}
            for power, c in comb.items():
                exps[var] = power
                terms[R.encode(exps)] = c
            return Polynomial(R, terms).monic()
        rows[max(v)] = (v, comb)
        k += 1
        cur = gb.reduce(x * cur)


def _radical_zero_dim(I: Ideal) -> Ideal:
    gb = I.gb()
    R = I.ring
    extra = []
    for i in range(R.nvars):
        p = _min_poly(gb, i)
        s = _euclid_squarefree(p)
        if s.total_degree() < p.total_degree():
            extra.append(s)
    if not extra:
        return Ideal.from_gb(gb)
    return Ideal(R, gb.elements + extra)


def _euclid_squarefree(p: Polynomial) -> Polynomial:
    var = _univariate_var(p)
    if var is None:
        return p
    g = _euclid(p, partial_derivative(p, var))
    return divide_exact(p, g).monic() if not g.is_constant() else p.monic()


def _lead_coefficient_in(g: Polynomial, block: set[int]) -> Polynomial:
    """Coefficient of the lead monomial of g viewed as a polynomial in the variables of block."""
    R = g.ring
    lead = g.lead_monomial()
    sig = tuple(lead[i] for i in sorted(block))
    terms = {}
    for exps, c in g.items():
        if tuple(exps[i] for i in sorted(block)) == sig:
            e = [0 if i in block else x for i, x in enumerate(exps)]
            terms[R.encode(e)] = c
    return Polynomial(R, terms)


def radical(I: Ideal) -> Ideal:
    """Radical of I, returned with its reduced Groebner basis."""
    out = _radical(I, 0)
    return Ideal.from_gb(out.gb())


def _order_change():
    # inputs are already a reduced basis in another order; sugar and interreduction stall here
    return config.limits(selection="normal", interreduce_inputs=False)


def _radical(I: Ideal, depth: int) -> Ideal:
    if depth > config.current().radical_depth:
        raise CapExceededError("radical recursion depth exceeded")
    R = I.ring
    gb = I.gb()
    if gb.is_unit() or gb.is_zero():
        return Ideal.from_gb(gb)
    if len(gb) == 1:
        return Ideal(R, [squarefree_part(gb.elements[0])])
    d, u = independent_set(I)
    if d == 0:
        return _radical_zero_dim(I)
    u = list(u)
    rest = [i for i in range(R.nvars) if i not in u]
    names = [R.names[i] for i in rest + u]
    degrees = [R.degrees[i] for i in rest + u]
    W = PolyRing(names, MonomialOrder.product((len(rest), len(u))), degrees)
    gw = [convert(g, W) for g in gb.elements]
    nr = len(rest)
    extra = []
    for pos in range(nr):
        others = [j for j in range(nr) if j != pos]
        vnames = [names[j] for j in others] + [names[pos]] + names[nr:]
        vdeg = [degrees[j] for j in others] + [degrees[pos]] + degrees[nr:]
        blocks = ((len(others),) if others else ()) + (1, len(u))
        V = PolyRing(vnames, MonomialOrder.product(blocks), vdeg)
        with _order_change():
            gbv = reduced_groebner([convert(g, V) for g in gw], ring=V)
        xi = len(others)
        cands = [g for g in gbv if g.support() <= set(range(xi, V.nvars)) and g.degree_in(xi) > 0]
        p = min(cands, key=lambda g: g.lead_key())
        s = squarefree_part(p, [xi])
        if s.degree_in(xi) < p.degree_in(xi):
            extra.append(convert(s, W))
    J = Ideal(W, gw + extra)
    with _order_change():
        gbw = reduced_groebner(gw, ring=W)
        gbj = J.gb()
    block = set(range(nr))
    h = W.one()
    seen = set()
    # leading coefficients of I's own basis too, so that I : h^inf is the contraction
    for g in list(gbw) + list(gbj):
        lc = _lead_coefficient_in(g, block).monic()
        if lc.is_constant() or lc in seen:
            continue
        seen.add(lc)
        h = h * lc
    if not h.is_constant():
        h = squarefree_part(h)
    A = saturate(J, h) if not h.is_constant() else J
    A = Ideal(R, [convert(g, R) for g in A.gb().elements])
    if h.is_constant():
        return A
    hR = convert(h, R)
    B = _radical(Ideal(R, gb.elements + [hR]), depth + 1)
    if B.contains_ideal(A):
        return A
    return intersect(A, B)


def is_radical(I: Ideal) -> bool:
    return equals(radical(I), I)


# ---------------------------------------------------------------- quotient-ring helpers


def is_nonzerodivisor(A: QuotientRing, f: Polynomial) -> bool:
    I = A.defining
    if I.is_unit():
        return True
    if I.contains(f):
        return False
    if I.is_zero():
        return True
    return equals(colon_element(I, f), I)


def minimal_generators(I: Ideal) -> Ideal:
    """Drop generators lying in the ideal of the remaining ones, scanning from the end."""
    kept = list(I.gens)
    i = len(kept) - 1
    while i >= 0:
        others = kept[:i] + kept[i + 1:]
        if not others and kept[i].is_zero():
            kept.pop(i)
        elif others and Ideal(I.ring, others).contains(kept[i]):
            kept.pop(i)
        i -= 1
    return Ideal(I.ring, kept)
