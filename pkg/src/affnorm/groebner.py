"""Buchberger's algorithm, division with quotients, syzygies and elimination."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

from . import config
from .errors import CapExceededError, InvariantViolationError, RingMismatchError
from .polyring import MonomialOrder, Polynomial, PolyRing, Rational, convert


def _common_ring(polys: Sequence[Polynomial], ring: PolyRing | None = None) -> PolyRing:
    for p in polys:
        if ring is None:
            ring = p.ring
        elif p.ring != ring:
            raise RingMismatchError(f"{p.ring} vs {ring}")
    if ring is None:
        raise ValueError("cannot infer a ring from an empty generator list")
    return ring


# ---------------------------------------------------------------- reduction kernel


class _Reducer:
    """Monic divisors prepared for repeated normal-form computations."""

    __slots__ = ("ring", "divisors")

    def __init__(self, ring: PolyRing, polys: Sequence[dict] = ()):
        self.ring = ring
        self.divisors: list[tuple[int, int, list]] = []
        for p in polys:
            self.add(p)

    def add(self, terms: dict):
        lk = max(terms)
        inv = 1 / terms[lk]
        tail = [(k, c * inv) for k, c in terms.items() if k != lk]
        self.divisors.append((lk, lk & self.ring._lowmask, tail))

    def normal_form(self, p: dict, full: bool = True) -> dict:
        """Remainder of p (consumed) modulo the divisors."""
        if not p or not self.divisors:
            return p
        R = self.ring
        guard, lowmask = R._guard, R._lowmask
        divisors = self.divisors
        heap = [-k for k in p]
        heapq.heapify(heap)
        pop, push = heapq.heappop, heapq.heappush
        rem = {}
        while heap:
            k = -pop(heap)
            c = p.pop(k, None)
            if c is None:
                continue
            low = (k & lowmask) | guard
            for lk, llow, tail in divisors:
                if (low - llow) & guard == guard:
                    s = k - lk
                    for tk, tc in tail:
                        nk = tk + s
                        v = p.get(nk)
                        if v is None:
                            if nk & guard:
                                R.check(nk)
                            p[nk] = -c * tc
                            push(heap, -nk)
                        else:
                            v -= c * tc
                            if v:
                                p[nk] = v
                            else:
                                del p[nk]
                    break
            else:
                rem[k] = c
                if not full:
                    rem.update(p)
                    return rem
        return rem


# ---------------------------------------------------------------- Groebner bases


@dataclass
class GroebnerBasis:
    """Reduced Groebner basis, elements monic and sorted ascending by lead monomial."""

    ring: PolyRing
    elements: list[Polynomial]

    def __post_init__(self):
        self._reducer = _Reducer(self.ring, [g.terms for g in self.elements])

    @property
    def order(self) -> MonomialOrder:
        return self.ring.order

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def is_zero(self) -> bool:
        return not self.elements

    def reduce(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise RingMismatchError(f"{f.ring} vs {self.ring}")
        return Polynomial(self.ring, self._reducer.normal_form(dict(f.terms)))

    def contains(self, f: Polynomial) -> bool:
        return self.reduce(f).is_zero()

    def lead_keys(self) -> list[int]:
        return [g.lead_key() for g in self.elements]

    def __eq__(self, other):
        return (isinstance(other, GroebnerBasis) and self.ring == other.ring
                and self.elements == other.elements)


class _Buchberger:
    def __init__(self, ring: PolyRing, npos: int, selection: str, degree_cap,
                 first_position_only: bool = False):
        self.ring = ring
        self.npos = npos
        self.first_only = first_position_only
        self.selection = selection
        self.degree_cap = degree_cap
        self.polys: list[dict] = []
        self.lead: list[int] = []
        self.lexp: list[tuple] = []
        self.sugar: list[int] = []
        self.active: list[int] = []
        self.reducer = _Reducer(ring)
        self.reducer_ids: list[int] = []
        self.pairs: dict[tuple[int, int], tuple] = {}
        self.heap: list = []

    # -- helpers

    def _lcm_exps(self, a: tuple, b: tuple) -> tuple:
        return tuple(x if x > y else y for x, y in zip(a, b))

    def _divides(self, a: tuple, b: tuple) -> bool:
        return all(x <= y for x, y in zip(a, b))

    def _same_position(self, a: tuple, b: tuple) -> bool:
        n = self.npos
        return not n or a[:n] == b[:n]

    def _disjoint(self, a: tuple, b: tuple) -> bool:
        return all(not (x and y) for x, y in zip(a, b))

    def _rebuild_reducer(self):
        self.reducer = _Reducer(self.ring)
        for i in self.active:
            self.reducer.add(self.polys[i])

    # -- main algorithm

    def add(self, terms: dict, sugar: int):
        R = self.ring
        lk = max(terms)
        inv = 1 / terms[lk]
        if inv != 1:
            terms = {k: c * inv for k, c in terms.items()}
        lh = R.decode(lk)
        if self.first_only and not lh[0]:
            # a syzygy row: never needed to reduce position-0 parts
            return
        h = len(self.polys)
        self.polys.append(terms)
        self.lead.append(lk)
        self.lexp.append(lh)
        self.sugar.append(sugar)
        self._update(h)

    def _update(self, h: int):
        R = self.ring
        guard, lowmask = R._guard, R._lowmask
        lh = self.lexp[h]
        llh = self.lead[h] & lowmask
        cand = []
        for g in self.active:
            lg = self.lexp[g]
            if self._same_position(lg, lh):
                lcm = self._lcm_exps(lg, lh)
                cand.append((g, lcm, R.encode(lcm) & lowmask, self._disjoint(lg, lh)))
        kept = []
        for idx, (g, lcm, lg_, disjoint) in enumerate(cand):
            if disjoint:
                kept.append((g, lcm, lg_, disjoint))
                continue
            # some other lcm divides this one, tested on packed exponent fields
            top = lg_ | guard
            redundant = any((top - l2) & guard == guard for _, _, l2, _ in cand[idx + 1:])
            if not redundant:
                redundant = any((top - l2) & guard == guard for _, _, l2, _ in kept)
            if not redundant:
                kept.append((g, lcm, lg_, disjoint))
        # prune old pairs via the chain criterion
        dead = []
        for (i, j), (lcm, _, lg_) in self.pairs.items():
            if (((lg_ | guard) - llh) & guard == guard
                    and self._lcm_exps(self.lexp[i], lh) != lcm
                    and self._lcm_exps(self.lexp[j], lh) != lcm):
                dead.append((i, j))
        for p in dead:
            del self.pairs[p]
        for g, lcm, lg_, disjoint in kept:
            if disjoint:
                continue
            lkey = R.encode(lcm)
            deg = sum(lcm)
            sug = max(self.sugar[g] + deg - sum(self.lexp[g]), self.sugar[h] + deg - sum(lh))
            self.pairs[(g, h)] = (lcm, lkey, lg_)
            if self.selection == "normal":
                entry = (lkey, g, h)
            else:
                entry = (sug, lkey, g, h)
            heapq.heappush(self.heap, entry)
        before = len(self.active)
        lead = self.lead
        self.active = [g for g in self.active
                       if (((lead[g] & lowmask) | guard) - llh) & guard != guard]
        self.active.append(h)
        if len(self.active) != before + 1:
            self._rebuild_reducer()
        else:
            self.reducer.add(self.polys[h])

    def _spoly(self, i: int, j: int, lkey: int) -> dict:
        si = lkey - self.lead[i]
        sj = lkey - self.lead[j]
        res = {}
        for k, c in self.polys[i].items():
            res[k + si] = c
        for k, c in self.polys[j].items():
            nk = k + sj
            v = res.get(nk)
            if v is None:
                res[nk] = -c
            else:
                v -= c
                if v:
                    res[nk] = v
                else:
                    del res[nk]
        return res

    def run(self):
        R = self.ring
        cap = self.degree_cap
        while self.heap:
            entry = heapq.heappop(self.heap)
            i, j = entry[-2], entry[-1]
            info = self.pairs.pop((i, j), None)
            if info is None:
                continue
            lkey = info[1]
            sug = entry[0] if self.selection != "normal" else None
            r = self.reducer.normal_form(self._spoly(i, j, lkey))
            if not r:
                continue
            if 0 in r and len(r) == 1:
                return [{0: Rational(1)}]
            if sug is None:
                sug = max(sum(R.decode(k)) for k in r)
            if cap is not None and sum(R.decode(max(r))) > cap:
                raise CapExceededError(f"Groebner basis degree cap {cap} exceeded")
            self.add(r, sug)
        return self.interreduced()

    def interreduced(self) -> list[dict]:
        R = self.ring
        active = sorted(self.active, key=lambda i: self.lead[i])
        # unreduced inputs may have leads divisible by other leads
        guard, lowmask = R._guard, R._lowmask
        minimal = []
        for i in active:
            top = (self.lead[i] & lowmask) | guard
            if not any((top - (self.lead[j] & lowmask)) & guard == guard for j in minimal):
                minimal.append(i)
        active = minimal
        # tail terms are below their own lead, so reducing against all is safe
        others = _Reducer(R, [self.polys[j] for j in active])
        out = []
        for i in active:
            p = dict(self.polys[i])
            lk = self.lead[i]
            c = p.pop(lk)
            tail = others.normal_form(p)
            tail[lk] = c
            out.append(tail)
        return out


def _lex_like(order: MonomialOrder) -> bool:
    if order.kind == "position":
        return _lex_like(order.base)
    return order.kind == "lex" or (order.kind == "product" and max(order.blocks) == 1)


def groebner_terms(polys: Sequence[dict], ring: PolyRing, npos: int = 0,
                   first_position_only: bool = False) -> list[dict]:
    lim = config.current()
    lex_like = _lex_like(ring.order)
    selection = lim.selection
    if selection == "auto":
        # sugar stalls on lex-like orders with inhomogeneous input
        selection = "normal" if lex_like else "sugar"
    eng = _Buchberger(ring, npos, selection, lim.degree_cap, first_position_only)
    seen = set()
    inputs = []
    for p in polys:
        if not p:
            continue
        if 0 in p and len(p) == 1:
            return [{0: Rational(1)}]
        key = frozenset(p.items())
        if key in seen:
            continue
        seen.add(key)
        inputs.append(p)
    inputs.sort(key=max)
    for p in inputs:
        if lim.interreduce_inputs and not lex_like:
            # lex-like orders skip this: reduction chains against a non-basis get very long
            p = eng.reducer.normal_form(dict(p))
            if not p:
                continue
            if 0 in p and len(p) == 1:
                return [{0: Rational(1)}]
        eng.add(dict(p), max(sum(ring.decode(k)) for k in p))
    return eng.run()


def reduced_groebner(gens: Sequence[Polynomial], order: MonomialOrder | None = None,
                     ring: PolyRing | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by gens."""
    ring = _common_ring(gens, ring)
    if order is not None and order != ring.order:
        ring = ring.with_order(order)
        gens = [convert(g, ring) for g in gens]
    out = groebner_terms([g.terms for g in gens], ring)
    return GroebnerBasis(ring, [Polynomial(ring, t) for t in out])


# ---------------------------------------------------------------- division with quotients


@dataclass
class LiftRecord:
    remainder: Polynomial
    quotients: list[Polynomial]


def normal_form_with_lift(f: Polynomial, divisors: Sequence[Polynomial],
                          order: MonomialOrder | None = None) -> LiftRecord:
    """Multivariate division of f by divisors, tried in list order."""
    ring = _common_ring([f, *divisors])
    if order is not None and order != ring.order:
        work = ring.with_order(order)
        rec = normal_form_with_lift(convert(f, work), [convert(d, work) for d in divisors])
        return LiftRecord(convert(rec.remainder, ring), [convert(q, ring) for q in rec.quotients])
    divs = []
    for d in divisors:
        if d.is_zero():
            divs.append(None)
            continue
        lk = d.lead_key()
        divs.append((lk, d.terms[lk], [(k, c) for k, c in d.terms.items() if k != lk]))
    quot = [dict() for _ in divisors]
    p = dict(f.terms)
    rem = {}
    while p:
        k = max(p)
        c = p[k]
        for idx, dv in enumerate(divs):
            if dv is None:
                continue
            lk, lc, tail = dv
            if ring.divides(lk, k):
                s = k - lk
                q = c / lc
                quot[idx][s] = quot[idx].get(s, 0) + q
                del p[k]
                for tk, tc in tail:
                    nk = tk + s
                    v = p.get(nk, 0) - q * tc
                    if v:
                        p[nk] = v
                    else:
                        p.pop(nk, None)
                break
        else:
            rem[k] = p.pop(k)
    return LiftRecord(Polynomial(ring, rem),
                      [Polynomial(ring, {k: v for k, v in q.items() if v}) for q in quot])


# ---------------------------------------------------------------- modules: syzygies and lifting


class ModuleGroebner:
    """POT module Groebner basis of the rows (h_i, e_i) for generators h_i.

    Position 0 holds the value and positions 1..k the coefficient vector.
    Rows whose position-0 entry vanishes generate the syzygy module, and
    reducing f*e_0 expresses f in terms of the generators.  With lift_only the
    syzygy rows are discarded as they appear, which is much cheaper when only
    lift() is needed.
    """

    def __init__(self, gens: Sequence[Polynomial], ring: PolyRing | None = None,
                 lift_only: bool = False):
        ring = _common_ring(gens, ring)
        self.base = ring
        self.k = k = len(gens)
        pos_names = tuple(f"__e{i}" for i in range(k + 1))
        while set(pos_names) & set(ring.names):
            pos_names = tuple("_" + p for p in pos_names)
        self.mring = M = PolyRing(pos_names + ring.names,
                                  MonomialOrder.position(k + 1, ring.order),
                                  [ring.degrees[0]] * (k + 1) + list(ring.degrees)
                                  if ring.nvars else None)
        self._embed = [M._coef[k + 1 + i] for i in range(ring.nvars)]
        rows = []
        for i, h in enumerate(gens):
            t = self._lift_terms(h.terms, 0)
            t[M._coef[i + 1]] = Rational(1)
            rows.append(t)
        self.lift_only = lift_only
        self.basis = groebner_terms(rows, M, npos=k + 1, first_position_only=lift_only)
        self._reducer = _Reducer(M, self.basis)

    def _lift_terms(self, terms: dict, pos: int) -> dict:
        R, M = self.base, self.mring
        pk = M._coef[pos]
        out = {}
        for key, c in terms.items():
            exps = R.decode(key)
            mk = pk
            for e, ck in zip(exps, self._embed):
                if e:
                    mk += e * ck
            out[mk] = c
        return out

    def _split(self, terms: dict) -> dict[int, dict]:
        """Group module terms by position, mapping monomials back to the base ring."""
        R, M, n = self.base, self.mring, self.k + 1
        out: dict[int, dict] = {}
        for key, c in terms.items():
            exps = M.decode(key)
            pos = next(i for i in range(n) if exps[i])
            out.setdefault(pos, {})[R.encode(exps[n:])] = c
        return out

    def syzygies(self) -> list[list[Polynomial]]:
        if self.lift_only:
            raise ValueError("syzygies were discarded (lift_only)")
        R = self.base
        out = []
        for t in self.basis:
            parts = self._split(t)
            if 0 in parts:
                continue
            out.append([Polynomial(R, parts.get(i + 1, {})) for i in range(self.k)])
        return out

    def lift(self, f: Polynomial) -> list[Polynomial] | None:
        """Coefficients c with sum c_i h_i = f, or None if f is not in the ideal."""
        r = self._reducer.normal_form(self._lift_terms(f.terms, 0))
        parts = self._split(r)
        if 0 in parts:
            return None
        R = self.base
        return [-Polynomial(R, parts.get(i + 1, {})) for i in range(self.k)]


def syzygies(gens: Sequence[Polynomial]) -> list[list[Polynomial]]:
    """Generators of the module of relations among gens."""
    if not gens:
        raise ValueError("syzygies of an empty list")
    return ModuleGroebner(gens).syzygies()


def lift(f: Polynomial, gens: Sequence[Polynomial]) -> list[Polynomial]:
    coeffs = ModuleGroebner(gens, f.ring, lift_only=True).lift(f)
    if coeffs is None:
        raise InvariantViolationError("polynomial is not in the ideal; cannot lift")
    return coeffs


# ---------------------------------------------------------------- elimination


def ring_without(ring: PolyRing, drop: set[str]) -> PolyRing:
    keep = [i for i, v in enumerate(ring.names) if v not in drop]
    names = [ring.names[i] for i in keep]
    degrees = [ring.degrees[i] for i in keep]
    order = ring.order
    if order.kind == "product":
        blocks, start = [], 0
        for size in order.blocks:
            n = sum(1 for i in keep if start <= i < start + size)
            if n:
                blocks.append(n)
            start += size
        order = MonomialOrder.product(blocks) if len(blocks) > 1 else MonomialOrder.grevlex()
    elif order.kind in ("eliminate", "position"):
        order = MonomialOrder.grevlex()
    return PolyRing(names, order, degrees)


def eliminate(gens: Sequence[Polynomial], drop_vars, target: PolyRing | None = None,
              ring: PolyRing | None = None) -> list[Polynomial]:
    """Generators of the ideal intersected with the subring on the remaining variables."""
    ring = _common_ring(gens, ring)
    drop = [v if isinstance(v, str) else ring.names[v] for v in drop_vars]
    if not set(drop) <= set(ring.names):
        raise ValueError(f"unknown variables in {drop}")
    rest = [v for v in ring.names if v not in drop]
    if target is None:
        target = ring_without(ring, set(drop))
    if not drop:
        gb = reduced_groebner([convert(g, target) for g in gens], ring=target)
        return list(gb.elements)
    deg = {v: d for v, d in zip(ring.names, ring.degrees)}
    work = PolyRing(drop + rest, MonomialOrder.eliminate(len(drop)),
                    [deg[v] for v in drop + rest])
    gb = reduced_groebner([convert(g, work) for g in gens], ring=work)
    nd = len(drop)
    out = []
    for g in gb.elements:
        if not (g.support() & set(range(nd))):
            out.append(convert(g, target))
    return out
