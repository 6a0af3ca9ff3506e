from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affnorm.ideals import Ideal, equals, minimal_generators, radical
from affnorm.polyring import PolyRing, RingMap, multidegree
from affnorm.rees import blowup, ideal_integral_closure

R2 = PolyRing("xy")
x, y = R2.gens()
R3 = PolyRing("xyz")
X, Y, Z = R3.gens()


def in_newton_polyhedron(p, vertices):
    """Is p >= some convex combination of two of the vertices (componentwise)?"""
    a, b = p
    for v in vertices:
        if v[0] <= a and v[1] <= b:
            return True
    for v in vertices:
        for w in vertices:
            # lam*v + (1-lam)*w <= p  <=>  lam*(v_i - w_i) <= p_i - w_i for i = 0, 1
            lo, hi = Fraction(0), Fraction(1)
            for i in range(2):
                d, r = v[i] - w[i], p[i] - w[i]
                if d > 0:
                    hi = min(hi, Fraction(r, d))
                elif d < 0:
                    lo = max(lo, Fraction(r, d))
                elif r < 0:
                    lo, hi = Fraction(1), Fraction(0)
            if lo <= hi:
                return True
    return False


def newton_closure(exps):
    """Brute-force integral closure of a monomial ideal in QQ[x, y]."""
    ma = max(e[0] for e in exps)
    mb = max(e[1] for e in exps)
    pts = [(a, b) for a in range(ma + 1) for b in range(mb + 1)
           if in_newton_polyhedron((a, b), exps)]
    return Ideal(R2, [R2.monomial(p) for p in pts])


def rees_sound(B):
    T = PolyRing(B.base.names + ("t",))
    t = T.gen("t")
    images = [T.gen(v) for v in B.base.names]
    images += [t * _up(g, T) for g in B.generator_images]
    phi = RingMap(B.ambient, T, images)
    for g in B.defining.gens:
        assert phi(g).is_zero()


def _up(g, T):
    return T.from_dict({e + (0,): c for e, c in g.items()})


def test_blowup_examples():
    B = blowup(Ideal(R2, [x ** 2 + x * y]))
    assert B.defining.is_zero()
    assert B.ambient.degrees[-1] == (2, 1)
    B = blowup(Ideal(R2, [x ** 2, y ** 3]))
    (g,) = B.defining.gens
    S = B.ambient
    bx, by, Y1, Y2 = S.gens()
    assert equals(B.defining, Ideal(S, [by ** 3 * Y1 - bx ** 2 * Y2]))
    assert multidegree(g) == (5, 1)
    B = blowup(Ideal(R2, [x, y]))
    S = B.ambient
    bx, by, Y1, Y2 = S.gens()
    assert equals(B.defining, Ideal(S, [by * Y1 - bx * Y2]))
    with pytest.raises(ValueError):
        blowup(Ideal(R2, []))


@pytest.mark.parametrize("gens", [[x ** 2, x * y ** 4, y ** 5], [x ** 3, y ** 2 + x],
                                  [X ** 2, Y * Z, Z ** 3], [Y ** 6 + X ** 2 * Z, -X ** 6 + Y ** 4 * Z ** 2]])
def test_rees_soundness(gens):
    B = blowup(Ideal(gens[0].ring, gens))
    rees_sound(B)
    homogeneous = all(multidegree(g) is not None for g in gens)
    if homogeneous:
        for g in B.defining.gens:
            assert multidegree(g) is not None


def test_closure_examples():
    got = ideal_integral_closure(Ideal(R2, [x ** 2, x * y ** 4, y ** 5]))
    assert equals(got, Ideal(R2, [x ** 2, x * y ** 3, y ** 5]))
    assert got.gens == [x ** 2, y ** 5, x * y ** 3]
    assert equals(got, newton_closure([(2, 0), (1, 4), (0, 5)]))
    assert ideal_integral_closure(Ideal(R2, [x ** 3])).gens == [x ** 3]
    assert equals(ideal_integral_closure(Ideal(R2, [x ** 2, y ** 3])),
                  Ideal(R2, [x ** 2, x * y ** 2, y ** 3]))


def test_closure_idempotent_monomial():
    once = ideal_integral_closure(Ideal(R2, [x ** 2, x * y ** 4, y ** 5]))
    assert equals(ideal_integral_closure(once), once)


exponent = st.tuples(st.integers(0, 8), st.integers(0, 8)).filter(lambda e: e != (0, 0))


@settings(max_examples=30)
@given(st.lists(exponent, min_size=1, max_size=3, unique=True))
def test_closure_matches_newton_oracle(exps):
    I = Ideal(R2, [R2.monomial(e) for e in exps])
    got = ideal_integral_closure(I)
    assert equals(got, newton_closure(exps))
    check_containment(I, got)


def check_containment(I, closure):
    assert closure.contains_ideal(I)
    rad = radical(I)
    for g in closure.gens:
        assert rad.contains(g)


def test_closure_containment_nonmonomial():
    I = Ideal(R2, [x ** 3 - y ** 2, x * y ** 2])
    check_containment(I, ideal_integral_closure(I))


def test_minimal_generators_after_closure():
    got = ideal_integral_closure(Ideal(R2, [x ** 4, y ** 4]))
    assert got == minimal_generators(got)
    assert equals(got, newton_closure([(4, 0), (0, 4)]))
