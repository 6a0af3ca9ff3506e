"""de Jong's normalization algorithm for reduced affine rings over QQ.

Each step picks a radical test ideal J containing a nonzerodivisor f, computes
(fJ + I : J) = f Hom(J, J) and, when it is strictly larger than (f) + I,
presents Hom(J, J) as a ring by adjoining T_i = v_i / f subject to the linear
(syzygy) and quadratic (multiplication table) relations.  Zerodivisors met on
the way split the ring along (I : g) and (I : (I : g)).
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from typing import Sequence

from . import config
from .errors import CapExceededError, InvariantViolationError, NotReducedError
from .groebner import ModuleGroebner, eliminate, lift
from .ideals import (Ideal, QuotientRing, colon, colon_element, dimension, equals, intersect,
                     is_nonzerodivisor, radical)
from .polyring import (Fraction, Polynomial, PolyRing, RingMap, convert, degree_component,
                       partial_derivative)

log = logging.getLogger(__name__)

FULL_JACOBIAN = "full_jacobian_radical"
SINGLE_ELEMENT = "single_element_radical"


@dataclass(frozen=True)
class TestIdealStrategy:
    kind: str = FULL_JACOBIAN

    def __post_init__(self):
        if self.kind not in (FULL_JACOBIAN, SINGLE_ELEMENT):
            raise ValueError(f"unknown test ideal strategy {self.kind!r}")


@dataclass
class NormalCertificate:
    """The Jacobian ideal is the unit ideal, so the ring is regular."""

    reason: str = "unit Jacobian ideal"


@dataclass
class EqualityCertificate:
    """(fJ + I : J) == (f) + I, i.e. Hom(J, J) = A."""

    f: Polynomial
    test_ideal: Ideal


class SplitSignal(Exception):
    """A zerodivisor g of the current ring was found."""

    def __init__(self, g: Polynomial):
        super().__init__(f"zerodivisor {g}")
        self.g = g


@dataclass
class HomData:
    f: Polynomial
    vs: list[Polynomial]
    test_ideal: Ideal
    quotient: Ideal


@dataclass
class Presentation:
    ring: QuotientRing
    map: RingMap
    fractions: list[Fraction]
    linear: list[Polynomial] = field(default_factory=list)
    quadratic: list[Polynomial] = field(default_factory=list)


@dataclass
class ExtensionStep:
    outcome: str  # "normal" | "extended" | "split"
    new_ring: QuotientRing | None = None
    new_fractions: list[Fraction] = field(default_factory=list)
    map: RingMap | None = None
    left: QuotientRing | None = None
    right: QuotientRing | None = None
    test_ideal: Ideal | None = None
    f: Polynomial | None = None
    vs: list[Polynomial] = field(default_factory=list)
    zerodivisor: Polynomial | None = None
    source: QuotientRing | None = None


@dataclass
class NormalComponent:
    presentation: QuotientRing
    normap: RingMap
    fractions: list[Fraction]
    degrees: list[tuple[int, ...]] | None
    base_ideal: Ideal
    fresh: list[str]

    def all_fractions(self) -> list[Fraction]:
        """Fractions of the fresh variables followed by the original variables."""
        R = self.base_ideal.ring
        return list(self.fractions) + [Fraction(v, R.one()) for v in R.gens()]


@dataclass
class NormalizationResult:
    components: list[NormalComponent]
    iterations: int
    timings: dict[str, float]
    steps: list[ExtensionStep] = field(default_factory=list)


# ---------------------------------------------------------------- helpers


def graded_components(I: Ideal) -> list[int]:
    """Grading components in which every Groebner basis element of I is homogeneous."""
    R = I.ring
    gb = I.gb().elements
    return [j for j in range(R.degree_width())
            if all(degree_component(g, j) is not None for g in gb)]


def _determinant(m: list[list[Polynomial]]) -> Polynomial:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _determinant(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else m[0][0].ring.zero()


def _fresh_names(ring: PolyRing, count: int, prefix: str, start: int) -> list[str]:
    names, i = [], start
    taken = set(ring.names)
    while len(names) < count:
        cand = f"{prefix}{i}"
        if cand not in taken:
            names.append(cand)
        i += 1
    return names


# ---------------------------------------------------------------- test ideals


def jacobian_ideal(A: QuotientRing) -> Ideal:
    """Defining ideal plus the c x c minors of the Jacobian, c the codimension."""
    I = A.defining
    R = A.ambient
    gb = I.gb()
    if gb.is_unit():
        raise ValueError("jacobian ideal of the zero ring")
    gens = gb.elements
    c = R.nvars - dimension(I)
    if c == 0:
        return Ideal(R, [R.one()])
    jac = [[partial_derivative(g, i) for i in range(R.nvars)] for g in gens]
    cols = [i for i in range(R.nvars) if any(not row[i].is_zero() for row in jac)]
    count = _comb(len(gens), c) * _comb(len(cols), c)
    cap = config.current().minor_cap
    if count > cap:
        raise CapExceededError(f"{count} Jacobian minors exceed the cap {cap}")
    minors = []
    for rows in itertools.combinations(range(len(gens)), c):
        for cs in itertools.combinations(cols, c):
            d = _determinant([[jac[r][k] for k in cs] for r in rows])
            if not d.is_zero():
                minors.append(d)
    return Ideal(R, list(gens) + minors, )


def _comb(n: int, k: int) -> int:
    from math import comb

    return comb(n, k) if 0 <= k <= n else 0


def test_ideal(A: QuotientRing, strategy: TestIdealStrategy = TestIdealStrategy()):
    """Radical ideal whose zero set contains the non-normal locus, or a NormalCertificate."""
    L = jacobian_ideal(A)
    if L.is_unit():
        return NormalCertificate()
    I = A.defining
    if strategy.kind == FULL_JACOBIAN:
        return radical(L)
    minors = [g for g in L.gens[len(I.gb().elements):] if not I.contains(g)]
    # split-first: a zerodivisor met before any nonzerodivisor splits the ring
    for g in minors:
        if is_nonzerodivisor(A, g):
            return radical(A.ideal([g]))
        raise SplitSignal(g)
    raise CapExceededError("every Jacobian minor lies in the defining ideal")


# ---------------------------------------------------------------- Hom(J, J)


def _choose_nonzerodivisor(A: QuotientRing, cands: list[Polynomial], domain: bool = False):
    """First nonzerodivisor among cands; any zerodivisor seen triggers a split.

    Outside domains every candidate is checked, so zerodivisors later in the
    list still split the ring.
    """
    found = None
    for g in cands:
        if not is_nonzerodivisor(A, g):
            raise SplitSignal(g)
        if found is None:
            found = g
            if domain:
                break
    return found


def hom_generators(A: QuotientRing, J: Ideal, domain: bool = False):
    """f and the new generators v of (fJ + I : J) modulo (f) + I, or an EqualityCertificate."""
    I = A.defining
    R = A.ambient
    cands = [g for g in J.gb().elements if not I.contains(g)]
    if not cands:
        raise InvariantViolationError("test ideal is contained in the defining ideal")
    f = _choose_nonzerodivisor(A, cands, domain)
    if f is None:
        raise CapExceededError("no nonzerodivisor found in the test ideal")
    fI = Ideal(R, [f] + I.gens)
    num = Ideal(R, [f * g for g in cands] + I.gens)
    Q = colon(num, Ideal(R, cands))
    if equals(Q, fI):
        return EqualityCertificate(f, J)
    vs: list[Polynomial] = []
    for v in Q.gb().elements:
        if not fI.contains(v):
            vs.append(v)
    # drop v already generated by (f) + I and the other kept v, scanning from the end
    i = len(vs) - 1
    while i >= 0:
        rest = vs[:i] + vs[i + 1:]
        if Ideal(R, [f] + I.gens + rest).contains(vs[i]):
            vs.pop(i)
        i -= 1
    return HomData(f, vs, J, Q)


def catanese_presentation(A: QuotientRing, f: Polynomial, vs: Sequence[Polynomial],
                          names: Sequence[str] | None = None, prefix: str = "T",
                          start: int = 1) -> Presentation:
    """Hom(J, J) = A[v_1/f, ..., v_m/f] as a quotient of A[T_1..T_m]."""
    R = A.ambient
    I = A.defining
    gI = I.gb().elements
    m = len(vs)
    if names is None:
        names = _fresh_names(R, m, prefix, start)
    comps = graded_components(I)
    width = R.degree_width()
    degs = []
    for v in vs:
        d = []
        for j in range(width):
            dv, df = degree_component(v, j), degree_component(f, j)
            d.append(dv - df if j in comps and dv is not None and df is not None else 1)
        degs.append(tuple(d))
    S = R.extend(names, degs)
    T = [S.gen(n) for n in names]
    up = lambda p: convert(p, S)  # noqa: E731

    syz = ModuleGroebner([f, *vs, *gI], R).syzygies()
    linear = []
    for vec in syz:
        rel = up(vec[0]) + sum((up(a) * t for a, t in zip(vec[1:m + 1], T)), S.zero())
        if not rel.is_zero():
            linear.append(rel)

    lifter = ModuleGroebner([f * f, *(f * v for v in vs), *gI], R, lift_only=True)
    quadratic = []
    for i in range(m):
        for j in range(i, m):
            beta = lifter.lift(vs[i] * vs[j])
            if beta is None:
                raise InvariantViolationError(
                    f"v{i}*v{j} is not in f*(f, v) + I; the quotient was not Hom(J, J)")
            rel = T[i] * T[j] - up(beta[0]) - sum((up(b) * t for b, t in zip(beta[1:m + 1], T)),
                                                  S.zero())
            quadratic.append(rel)
    relations = [up(g) for g in gI] + linear + quadratic
    ring = QuotientRing(S, Ideal(S, relations))
    fmap = RingMap(R, ring, [S.gen(v) for v in R.names])
    fractions = [Fraction(v, f).reduced() for v in vs]
    return Presentation(ring, fmap, fractions, linear, quadratic)


def presentation_by_saturation(A: QuotientRing, f: Polynomial, vs: Sequence[Polynomial],
                               names: Sequence[str]) -> Ideal:
    """Kernel of A[T] -> A_f, T_i -> v_i/f, as (I + (f T_i - v_i)) : f^infinity."""
    from .ideals import saturate

    R = A.ambient
    S = R.extend(names)
    up = lambda p: convert(p, S)  # noqa: E731
    gens = [up(g) for g in A.defining.gens]
    gens += [up(f) * S.gen(n) - up(v) for n, v in zip(names, vs)]
    return saturate(Ideal(S, gens), up(f))


# ---------------------------------------------------------------- one step


def split_ring(A: QuotientRing, g: Polynomial) -> tuple[QuotientRing, QuotientRing]:
    I = A.defining
    R = A.ambient
    left = colon_element(I, g)
    right = colon(I, left)
    if not equals(intersect(left, right), I):
        raise NotReducedError("split by a zerodivisor does not recover the ring; "
                              "input is not reduced")
    return QuotientRing(R, Ideal.from_gb(left.gb())), QuotientRing(R, Ideal.from_gb(right.gb()))


def dejong_step(A: QuotientRing, strategy: TestIdealStrategy = TestIdealStrategy(),
                prefix: str = "T", start: int = 1, J: Ideal | None = None,
                domain: bool = False) -> ExtensionStep:
    """One Grauert-Remmert test; J, when given, must be a valid radical test ideal."""
    try:
        if J is None:
            J = test_ideal(A, strategy)
            if isinstance(J, NormalCertificate):
                return ExtensionStep("normal", source=A)
        hom = hom_generators(A, J, domain=domain)
        if isinstance(hom, EqualityCertificate):
            return ExtensionStep("normal", test_ideal=J, f=hom.f, source=A)
        pres = catanese_presentation(A, hom.f, hom.vs, prefix=prefix, start=start)
        return ExtensionStep("extended", new_ring=pres.ring, new_fractions=pres.fractions,
                             map=pres.map, test_ideal=J, f=hom.f, vs=hom.vs, source=A)
    except SplitSignal as sig:
        left, right = split_ring(A, sig.g)
        return ExtensionStep("split", left=left, right=right, zerodivisor=sig.g, source=A)


# ---------------------------------------------------------------- driver


def _compose(p: Polynomial, base: PolyRing, fracs: dict[int, Fraction]) -> tuple[Polynomial, Polynomial]:
    """(N, D) with N/D = p after substituting fracs for the fresh variables."""
    nb = base.nvars
    emax = {}
    for exps, _ in p.items():
        for i, e in enumerate(exps):
            if i in fracs and e > emax.get(i, 0):
                emax[i] = e
    powers: dict[tuple[int, int, int], Polynomial] = {}

    def pw(i, which, e):
        key = (i, which, e)
        if key not in powers:
            fr = fracs[i]
            powers[key] = (fr.num if which == 0 else fr.den) ** e
        return powers[key]

    num = base.zero()
    for exps, c in p.items():
        term = base.monomial(list(exps[:nb]), c)
        for i, e in emax.items():
            b = exps[i]
            if b:
                term = term * pw(i, 0, b)
            if e - b:
                term = term * pw(i, 1, e - b)
        num = num + term
    den = base.one()
    for i, e in emax.items():
        den = den * pw(i, 1, e)
    return num, den


@dataclass
class _State:
    ring: QuotientRing
    fractions: list[Fraction]
    base: Ideal
    next_index: int
    test: list[Polynomial] | None = None


def _contract(I: Ideal, base: PolyRing) -> Ideal:
    S = I.ring
    drop = [v for v in S.names if v not in base.names]
    if not drop:
        return Ideal(base, [convert(g, base) for g in I.gb().elements])
    return Ideal(base, eliminate(I.gb().elements, drop, target=base, ring=S))


def _solvable_variable(g: Polynomial, candidates: set[int]):
    """A candidate variable occurring in g only as a lone linear term c*T."""
    counts: dict[int, int] = {}
    linear: dict[int, object] = {}
    for exps, c in g.items():
        for i in candidates:
            if exps[i]:
                counts[i] = counts.get(i, 0) + 1
                if exps[i] == 1 and sum(exps) == 1:
                    linear[i] = c
    for i in sorted(linear):
        if counts[i] == 1:
            return i, linear[i]
    return None


def minimize_presentation(A: QuotientRing, nbase: int):
    """Eliminate fresh variables equal to polynomials in the remaining variables.

    Returns the smaller ring and the substitution map from A's ambient ring.
    """
    S = A.ambient
    K = A.defining
    images = list(S.gens())
    cur_ring, cur = S, K
    while True:
        fresh = set(range(nbase, cur_ring.nvars))
        hit = None
        for g in cur.gb().elements:
            sol = _solvable_variable(g, fresh)
            if sol is not None:
                hit = (g, *sol)
                break
        if hit is None:
            break
        g, i, c = hit
        name = cur_ring.names[i]
        value = (cur_ring.gen(i) * c - g) * (1 / c)
        keep = [v for v in cur_ring.names if v != name]
        new_ring = PolyRing(keep, _drop_from_order(cur_ring, i),
                            [cur_ring.degrees[j] for j in range(cur_ring.nvars) if j != i])
        sub = RingMap(cur_ring, new_ring,
                      [convert(value, new_ring) if j == i else new_ring.gen(v)
                       for j, v in enumerate(cur_ring.names)])
        images = [sub(p) for p in images]
        cur = Ideal(new_ring, [sub(p) for p in cur.gb().elements])
        cur_ring = new_ring
    if cur_ring is S:
        return A, RingMap(S, A, S.gens())
    ring = QuotientRing(cur_ring, cur)
    return ring, RingMap(S, ring, images)


def _drop_from_order(ring: PolyRing, i: int):
    from .groebner import ring_without

    return ring_without(ring, {ring.names[i]}).order


def normalize_ring(A: QuotientRing, strategy: TestIdealStrategy = TestIdealStrategy(),
                   max_iterations: int | None = None, assume_reduced: bool = False,
                   prefix: str = "T", domain: bool = False, minimize: bool = True,
                   reuse_test_ideal: bool = True, simplify: bool = True) -> NormalizationResult:
    """Normalization of A as a list of normal components with fraction generators."""
    lim = config.current()
    if max_iterations is None:
        max_iterations = lim.max_iterations
    timings = {"reducedness": 0.0, "test_ideal": 0.0, "steps": 0.0, "compose": 0.0,
               "minimize": 0.0}
    base = A.ambient
    nb = base.nvars
    t0 = time.perf_counter()
    if not assume_reduced and not equals(radical(A.defining), A.defining):
        raise NotReducedError("the defining ideal is not radical")
    timings["reducedness"] = time.perf_counter() - t0

    work = [_State(A, [], A.defining, 1)]
    done: list[NormalComponent] = []
    steps: list[ExtensionStep] = []
    iterations = 0
    while work:
        st = work.pop(0)
        if st.ring.defining.is_unit():
            continue
        iterations += 1
        if iterations > max_iterations:
            raise CapExceededError(f"normalization needed more than {max_iterations} steps")
        J = None
        if st.test is not None and reuse_test_ideal:
            t0 = time.perf_counter()
            J = radical(st.ring.ideal(st.test))
            timings["test_ideal"] += time.perf_counter() - t0
        t0 = time.perf_counter()
        step = dejong_step(st.ring, strategy, prefix=prefix, start=st.next_index, J=J,
                           domain=domain)
        timings["steps"] += time.perf_counter() - t0
        steps.append(step)
        log.info("step %d: %s", iterations, step.outcome)
        if step.outcome == "normal":
            done.append(_finish(st, base, prefix, simplify))
        elif step.outcome == "split":
            for part in (step.left, step.right):
                work.append(_State(part, st.fractions, _contract(part.defining, base)
                                   if st.fractions else Ideal.from_gb(part.defining.gb()),
                                   st.next_index, st.test))
        else:
            t0 = time.perf_counter()
            S = st.ring.ambient
            fracs = {S.index(v): fr for v, fr in zip(S.names[nb:], st.fractions)}
            new = []
            for fr in step.new_fractions:
                nv, dv = _compose(fr.num, base, fracs)
                nf, df = _compose(fr.den, base, fracs)
                new.append(Fraction(nv * df, dv * nf).reduced())
            timings["compose"] += time.perf_counter() - t0
            ring = step.new_ring
            fractions = st.fractions + new
            test = [convert(g, ring.ambient) for g in step.test_ideal.gb().elements]
            if minimize:
                t0 = time.perf_counter()
                names_before = ring.ambient.names
                ring, sub = minimize_presentation(ring, nb)
                kept = set(ring.ambient.names)
                fractions = [fr for v, fr in zip(names_before[nb:], fractions) if v in kept]
                test = [sub(g) for g in test]
                timings["minimize"] += time.perf_counter() - t0
            work.insert(0, _State(ring, fractions, st.base, st.next_index + len(new), test))
    return NormalizationResult(done, iterations, timings, steps)


def simplify_fraction(fr: Fraction, I: Ideal) -> Fraction:
    """Equivalent fraction whose denominator is the smallest usable element of ((b)+I : a)."""
    a, b = fr.num, fr.den
    if I.contains(a):
        return Fraction(a.ring.zero(), a.ring.one())
    dens = colon_element(I + Ideal(I.ring, [b]), a)
    A = QuotientRing(I.ring, I)
    cands = sorted((g for g in dens.gb().elements if not I.contains(g)),
                   key=lambda g: (len(g.terms) > 1, g.total_degree(), g.lead_key()))
    best = None
    for d in cands:
        rank = (len(d.terms) > 1, d.total_degree())
        if best is not None and rank > best[0]:
            break
        if rank >= (len(b.terms) > 1, b.total_degree()) and best is None and d != b:
            if rank > (len(b.terms) > 1, b.total_degree()):
                break
        if not is_nonzerodivisor(A, d):
            continue
        num = A.reduce(lift(d * a, [b] + list(I.gb().elements))[0])
        cand = Fraction(num, d).reduced()
        key = (rank, cand.num.total_degree(), cand.den.lead_key())
        if best is None or key < best[1]:
            best = (rank, key, cand)
    return best[2] if best is not None else fr


def _finish(st: _State, base: PolyRing, prefix: str, simplify: bool = True) -> NormalComponent:
    S = st.ring.ambient
    fresh = list(S.names[base.nvars:])
    # renumber the surviving fresh variables consecutively; key layout is unchanged
    renamed = _fresh_names(base, len(fresh), prefix, 1)
    if renamed != fresh:
        S2 = PolyRing(base.names + tuple(renamed), S.order, S.degrees)
        gens = [Polynomial(S2, g.terms) for g in st.ring.defining.gb().elements]
        st = _State(QuotientRing(S2, Ideal(S2, gens)), st.fractions, st.base, st.next_index)
        S, fresh = S2, renamed
    fractions = st.fractions
    if simplify:
        fractions = [simplify_fraction(fr, st.base) for fr in fractions]
    comps = graded_components(st.ring.defining)
    degrees = [S.degrees[S.index(v)] for v in fresh] if comps else None
    gb = st.ring.defining.gb()
    pres = QuotientRing(S, Ideal.from_gb(gb))
    normap = RingMap(base, pres, [S.gen(v) for v in base.names])
    return NormalComponent(pres, normap, fractions, degrees, st.base, fresh)


def ic_fractions(A: QuotientRing, **kwargs) -> list[list[Fraction]]:
    """Per component: fresh-variable fractions first, then the original variables."""
    res = normalize_ring(A, **kwargs)
    return [c.all_fractions() for c in res.components]
