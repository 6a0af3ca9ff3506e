"""Rees algebras R[tI] and integral closure of ideals through their normalization."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .errors import InexactDivisionError
from .groebner import reduced_groebner
from .ideals import Ideal, QuotientRing, minimal_generators
from .normalize import NormalizationResult, normalize_ring
from .polyring import (MonomialOrder, Polynomial, PolyRing, RingMap, convert, degree_component,
                       divide_exact, max_degree_component)

log = logging.getLogger(__name__)


@dataclass
class ReesPresentation:
    ambient: PolyRing
    defining: Ideal
    generator_images: list[Polynomial]
    base: PolyRing

    @property
    def fresh(self) -> list[str]:
        return list(self.ambient.names[self.base.nvars:])

    def ring(self) -> QuotientRing:
        return QuotientRing(self.ambient, self.defining)

    def image_map(self) -> RingMap:
        """Y_i -> g_i, original variables fixed: the degree-one evaluation into the base."""
        B = self.base
        return RingMap(self.ambient, B, list(B.gens()) + list(self.generator_images))


def _unused(names, prefix: str, count: int) -> list[str]:
    taken, out, i = set(names), [], 1
    while len(out) < count:
        if f"{prefix}{i}" not in taken:
            out.append(f"{prefix}{i}")
        i += 1
    return out


def _unused_symbol(names, stem: str) -> str:
    taken = set(names)
    while stem in taken:
        stem += "_"
    return stem


def blowup(I: Ideal) -> ReesPresentation:
    """Defining ideal of R[tI] in the bigraded ring R[Y_1..Y_n]."""
    R = I.ring
    gens = [g for g in I.gens if not g.is_zero()]
    if not gens:
        raise ValueError("blowup of the zero ideal")
    n, m = R.nvars, len(gens)
    ys = _unused(R.names, "Y", m)
    t = _unused_symbol(R.names + tuple(ys), "t")
    gdeg = [max_degree_component(g) for g in gens]
    xdeg = [d[0] for d in R.degrees]

    S = PolyRing((t,) + R.names + tuple(ys), MonomialOrder.eliminate(1),
                 [(1,)] + [(d,) for d in xdeg] + [(1 + d,) for d in gdeg])
    tv = S.gen(0)
    rel = [S.gen(n + 1 + i) - tv * convert(g, S) for i, g in enumerate(gens)]
    gb = reduced_groebner(rel, ring=S)
    kept = [g for g in gb.elements if g.degree_in(0) == 0]

    T = PolyRing(R.names + tuple(ys), MonomialOrder.product([n, m]),
                 [(d, 0) for d in xdeg] + [(d, 1) for d in gdeg])
    defining = minimal_generators(Ideal(T, [convert(g, T) for g in kept]))
    return ReesPresentation(T, defining, gens, R)


def _t_degree(p: Polynomial) -> int:
    d = degree_component(p, 1)
    if d is None:
        raise InexactDivisionError(f"{p} is not homogeneous in the Rees grading")
    return d


def closure_from_normalization(B: ReesPresentation, res: NormalizationResult,
                               I: Ideal) -> Ideal:
    """Lift the t-degree-one fresh fractions of the normalized Rees algebra back to R."""
    R = B.base
    phi = B.image_map()
    new = []
    for comp in res.components:
        for fr in comp.fractions:
            if _t_degree(fr.num) - _t_degree(fr.den) != 1:
                continue
            num, den = phi(fr.num), phi(fr.den)
            q = divide_exact(num, den)
            log.debug("closure element %s from %s", q, fr)
            new.append(q.monic())
    return minimal_generators(Ideal(R, list(I.gens) + new))


def ideal_integral_closure(I: Ideal, **kwargs) -> Ideal:
    """Integral closure of I, read off from the normalization of its Rees algebra."""
    B = blowup(I)
    if B.defining.is_zero():
        # the Rees algebra is a polynomial ring over a normal base
        return minimal_generators(Ideal(I.ring, list(I.gens)))
    prefix = _unused_symbol(B.ambient.names, "T")
    kwargs.setdefault("assume_reduced", True)
    kwargs.setdefault("domain", True)
    res = normalize_ring(B.ring(), prefix=prefix, **kwargs)
    return closure_from_normalization(B, res, I)
