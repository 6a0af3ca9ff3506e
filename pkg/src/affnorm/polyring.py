"""Sparse multivariate polynomials over QQ.

Monomials are packed into a single Python integer ("key").  The key is a
linear function of the exponent vector, so multiplying monomials is integer
addition, and it is built from the weight rows of the monomial order so that
comparing keys as integers compares monomials in that order.  The low bits of
a key hold the raw exponents (one guard bit per field) which makes
divisibility and overflow tests cheap bit operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as _PyFraction
from typing import Iterable, Sequence

import gmpy2

from .errors import InexactDivisionError, MonomialOverflowError, RingMismatchError

Rational = gmpy2.mpq

EXP_BITS = 16
MAX_EXPONENT = (1 << EXP_BITS) - 1

LESS, EQUAL, GREATER = -1, 0, 1


def to_rational(c) -> gmpy2.mpq:
    if isinstance(c, type(Rational())):
        return c
    if isinstance(c, _PyFraction):
        return Rational(c.numerator, c.denominator)
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not supported")
    return Rational(c)


# ---------------------------------------------------------------- orders


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order given by integer weight rows compared lexicographically.

    kind is one of ``lex``, ``grevlex``, ``eliminate`` (parameter ``k``:
    degree in the first ``k`` variables, ties by grevlex on all), ``product``
    (``blocks``: grevlex inside each block, blocks compared left to right) and
    ``position`` (``k`` leading lex variables, then the ``base`` order on the
    rest; used for module elements encoded with position variables).
    """

    kind: str = "grevlex"
    k: int = 0
    blocks: tuple[int, ...] = ()
    base: "MonomialOrder | None" = None

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "eliminate", "product", "position"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "position" and self.base is None:
            raise ValueError("position order needs a base order")

    @classmethod
    def lex(cls):
        return cls("lex")

    @classmethod
    def grevlex(cls):
        return cls("grevlex")

    @classmethod
    def eliminate(cls, k: int):
        return cls("eliminate", k=k)

    @classmethod
    def product(cls, blocks: Sequence[int]):
        return cls("product", blocks=tuple(blocks))

    @classmethod
    def position(cls, k: int, base: "MonomialOrder"):
        return cls("position", k=k, base=base)

    def rows(self, n: int) -> list[list[int]]:
        """Weight rows (each of length n); the order is lex on the row values."""
        if self.kind == "lex":
            return [[int(i == j) for j in range(n)] for i in range(n)]
        if self.kind == "grevlex":
            return _grevlex_rows(range(n), n)
        if self.kind == "eliminate":
            if not 0 <= self.k <= n:
                raise ValueError("elimination block larger than the ring")
            head = [[int(j < self.k) for j in range(n)]]
            return head + _grevlex_rows(range(n), n)
        if self.kind == "product":
            if sum(self.blocks) != n:
                raise ValueError(f"product blocks {self.blocks} do not cover {n} variables")
            rows, start = [], 0
            for size in self.blocks:
                rows += _grevlex_rows(range(start, start + size), n)
                start += size
            return rows
        # position
        rows = [[int(i == j) for j in range(n)] for i in range(self.k)]
        for r in self.base.rows(n - self.k):
            rows.append([0] * self.k + r)
        return rows

    def extended(self, n_old: int, m: int) -> "MonomialOrder":
        """The order used after appending m variables to a ring of n_old variables."""
        if self.kind == "product":
            return MonomialOrder.product(self.blocks[:-1] + (self.blocks[-1] + m,))
        if self.kind == "position":
            return MonomialOrder.position(self.k, self.base.extended(n_old - self.k, m))
        return self

    def __str__(self):
        if self.kind == "eliminate":
            return f"eliminate({self.k})"
        if self.kind == "product":
            return f"product{self.blocks}"
        if self.kind == "position":
            return f"position({self.k}, {self.base})"
        return self.kind


def _grevlex_rows(indices: Iterable[int], n: int) -> list[list[int]]:
    idx = list(indices)
    if not idx:
        return []
    rows = [[int(j in idx) for j in range(n)]]
    for v in reversed(idx[1:]):
        rows.append([-int(j == v) for j in range(n)])
    return rows


def compare_monomials(m1: Sequence[int], m2: Sequence[int], order: MonomialOrder) -> int:
    """Compare exponent vectors directly from the order's weight rows."""
    if len(m1) != len(m2):
        raise ValueError("monomials of different length")
    for row in order.rows(len(m1)):
        a = sum(w * e for w, e in zip(row, m1))
        b = sum(w * e for w, e in zip(row, m2))
        if a != b:
            return GREATER if a > b else LESS
    return EQUAL


# ---------------------------------------------------------------- rings


class PolyRing:
    """Polynomial ring QQ[names] with a monomial order and per-variable multidegrees."""

    __slots__ = ("names", "order", "degrees", "nvars", "_index", "_coef", "_shift",
                 "_lowmask", "_guard", "_emask", "_hash")

    def __init__(self, names: Sequence[str], order: MonomialOrder | str = "grevlex",
                 degrees: Sequence[Sequence[int]] | None = None):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        if isinstance(order, str):
            order = MonomialOrder(order)
        if degrees is None:
            degrees = [(1,)] * len(names)
        degrees = tuple(tuple(int(d) for d in deg) for deg in degrees)
        if len(degrees) != len(names):
            raise ValueError("one degree vector per variable is required")
        if degrees and len({len(d) for d in degrees}) != 1:
            raise ValueError("degree vectors must have equal length")
        self.names = names
        self.order = order
        self.degrees = degrees
        self.nvars = n = len(names)
        self._index = {v: i for i, v in enumerate(names)}

        field = EXP_BITS + 1
        self._shift = field
        self._lowmask = (1 << (n * field)) - 1
        self._guard = sum(1 << (i * field + EXP_BITS) for i in range(n))
        self._emask = MAX_EXPONENT
        rows = order.rows(n)
        maxw = max((abs(w) for r in rows for w in r), default=1)
        rbits = EXP_BITS + max(n, 1).bit_length() + maxw.bit_length() + 3
        nrows = len(rows)
        coef = []
        for i in range(n):
            high = 0
            for r, row in enumerate(rows):
                if row[i]:
                    high += row[i] << (rbits * (nrows - 1 - r))
            coef.append((high << (n * field)) + (1 << (i * field)))
        self._coef = tuple(coef)
        self._hash = hash((names, order, degrees))

    # -- identity

    def __eq__(self, other):
        return (self is other or isinstance(other, PolyRing) and self.names == other.names
                and self.order == other.order and self.degrees == other.degrees)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"QQ[{', '.join(self.names)}] ({self.order})"

    # -- monomial packing

    def encode(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        key = 0
        for e, c in zip(exps, self._coef):
            if e:
                if e < 0:
                    raise ValueError("negative exponent")
                if e > MAX_EXPONENT:
                    raise MonomialOverflowError(f"exponent {e} exceeds {MAX_EXPONENT}")
                key += e * c
        return key

    def decode(self, key: int) -> tuple[int, ...]:
        low = key & self._lowmask
        s, m = self._shift, self._emask
        return tuple((low >> (i * s)) & m for i in range(self.nvars))

    def check(self, key: int) -> int:
        if key & self._guard:
            raise MonomialOverflowError(f"exponent exceeds {MAX_EXPONENT}")
        return key

    def divides(self, a: int, b: int) -> bool:
        """True iff monomial a divides monomial b (keys)."""
        g = self._guard
        return (((b & self._lowmask) | g) - (a & self._lowmask)) & g == g

    def lcm(self, a: int, b: int) -> int:
        ea, eb = self.decode(a), self.decode(b)
        return self.encode([x if x > y else y for x, y in zip(ea, eb)])

    def monomial_degree(self, key: int) -> int:
        return sum(self.decode(key))

    # -- constructors

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name}") from None

    def gen(self, i: int | str) -> "Polynomial":
        if isinstance(i, str):
            i = self.index(i)
        return Polynomial(self, {self._coef[i]: Rational(1)})

    def gens(self) -> list["Polynomial"]:
        return [self.gen(i) for i in range(self.nvars)]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        c = to_rational(c)
        return Polynomial(self, {0: c} if c else {})

    def monomial(self, exps: Sequence[int], coeff=1) -> "Polynomial":
        c = to_rational(coeff)
        return Polynomial(self, {self.encode(exps): c} if c else {})

    def from_dict(self, d: dict) -> "Polynomial":
        terms = {}
        for exps, c in d.items():
            c = to_rational(c)
            if c:
                k = self.encode(exps)
                v = terms.get(k, 0) + c
                if v:
                    terms[k] = v
                else:
                    terms.pop(k, None)
        return Polynomial(self, terms)

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            return value if value.ring == self else convert(value, self)
        return self.constant(value)

    # -- derived rings

    def extend(self, names: Sequence[str], degrees: Sequence[Sequence[int]] | None = None,
               order: MonomialOrder | None = None) -> "PolyRing":
        """Append variables; the order grows its last block unless given."""
        if degrees is None:
            width = len(self.degrees[0]) if self.degrees else 1
            degrees = [(1,) + (0,) * (width - 1)] * len(names)
        if order is None:
            order = self.order.extended(self.nvars, len(names))
        return PolyRing(self.names + tuple(names), order, self.degrees + tuple(map(tuple, degrees)))

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.names, order, self.degrees)

    def degree_width(self) -> int:
        return len(self.degrees[0]) if self.degrees else 1


def convert(f: "Polynomial", ring: PolyRing) -> "Polynomial":
    """Move f into ring, matching variables by name."""
    src = f.ring
    if src == ring:
        return f
    perm = []
    for i, v in enumerate(src.names):
        perm.append(ring._index.get(v))
    terms = {}
    for k, c in f.terms.items():
        exps = src.decode(k)
        new = [0] * ring.nvars
        for i, e in enumerate(exps):
            if e:
                j = perm[i]
                if j is None:
                    raise RingMismatchError(f"variable {src.names[i]} not in target ring {ring}")
                new[j] = e
        terms[ring.encode(new)] = c
    return Polynomial(ring, terms)


# ---------------------------------------------------------------- polynomials


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps monomial keys to nonzero mpq."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- coercion helpers

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        return self.ring.constant(other)

    # -- basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def lead_key(self) -> int:
        return max(self.terms)

    def lead_coeff(self) -> gmpy2.mpq:
        return self.terms[max(self.terms)] if self.terms else Rational(0)

    def lead_monomial(self) -> tuple[int, ...]:
        return self.ring.decode(max(self.terms))

    def items(self) -> list[tuple[tuple[int, ...], gmpy2.mpq]]:
        """(exponents, coefficient) pairs, descending in the monomial order."""
        dec = self.ring.decode
        return [(dec(k), self.terms[k]) for k in sorted(self.terms, reverse=True)]

    def monomials(self) -> list[tuple[int, ...]]:
        return [e for e, _ in self.items()]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        dec = self.ring.decode
        return max(sum(dec(k)) for k in self.terms)

    def degree_in(self, var: int | str) -> int:
        if isinstance(var, str):
            var = self.ring.index(var)
        dec = self.ring.decode
        return max((dec(k)[var] for k in self.terms), default=-1)

    def support(self) -> set[int]:
        """Indices of variables occurring in f."""
        used = 0
        for k in self.terms:
            used |= k & self.ring._lowmask
        exps = self.ring.decode(used)  # OR of fields is nonzero iff some exponent is
        return {i for i, e in enumerate(exps) if e}

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.lead_coeff()
        if lc == 1:
            return self
        inv = 1 / lc
        return Polynomial(self.ring, {k: c * inv for k, c in self.terms.items()})

    def coefficient(self, exps: Sequence[int]) -> gmpy2.mpq:
        return self.terms.get(self.ring.encode(exps), Rational(0))

    # -- arithmetic

    def __neg__(self):
        return Polynomial(self.ring, {k: -c for k, c in self.terms.items()})

    def __add__(self, other):
        other = self._coerce(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        res = dict(big)
        for k, c in small.items():
            v = res.get(k)
            if v is None:
                res[k] = c
            else:
                v += c
                if v:
                    res[k] = v
                else:
                    del res[k]
        return Polynomial(self.ring, res)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        res = dict(self.terms)
        for k, c in other.terms.items():
            v = res.get(k)
            if v is None:
                res[k] = -c
            else:
                v -= c
                if v:
                    res[k] = v
                else:
                    del res[k]
        return Polynomial(self.ring, res)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = to_rational(other)
            if not c:
                return self.ring.zero()
            return Polynomial(self.ring, {k: v * c for k, v in self.terms.items()})
        other = self._coerce(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        guard = self.ring._guard
        res: dict = {}
        get = res.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                v = get(k)
                if v is None:
                    res[k] = ca * cb
                else:
                    res[k] = v + ca * cb
        for k in [k for k, v in res.items() if not v]:
            del res[k]
        if any(k & guard for k in res):
            raise MonomialOverflowError(f"exponent exceeds {MAX_EXPONENT}")
        return Polynomial(self.ring, res)

    __rmul__ = __mul__

    def scalar_mul(self, c) -> "Polynomial":
        return self * to_rational(c)

    def mul_term(self, key: int, coeff) -> "Polynomial":
        """Multiply by the single term coeff * (monomial with this key)."""
        if not coeff:
            return self.ring.zero()
        chk = self.ring.check
        return Polynomial(self.ring, {chk(k + key): c * coeff for k, c in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            return divide_exact(self, other)
        c = to_rational(other)
        return self * (1 / c)

    # -- identity

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self.terms == self.ring.constant(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_polynomial(self)

    # -- calculus and grading

    def derivative(self, var: int | str) -> "Polynomial":
        return partial_derivative(self, var)

    def multidegree(self):
        return multidegree(self)


def format_polynomial(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    names = f.ring.names
    parts = []
    for exps, c in f.items():
        mono = "*".join(names[i] if e == 1 else f"{names[i]}^{e}"
                        for i, e in enumerate(exps) if e)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def poly_arithmetic(a: Polynomial, b: Polynomial | None, op: str, scalar=None) -> Polynomial:
    """Dispatch helper mirroring the add/sub/mul/negate/scalar_mul operation set."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "negate":
        return -a
    if op == "scalar_mul":
        return a.scalar_mul(scalar)
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(f: Polynomial, var: int | str) -> Polynomial:
    R = f.ring
    if isinstance(var, str):
        var = R.index(var)
    if not 0 <= var < R.nvars:
        raise IndexError(f"variable index {var} out of range")
    c_var = R._coef[var]
    shift = R._shift * var
    terms = {}
    for k, c in f.terms.items():
        e = (k >> shift) & R._emask
        if e:
            terms[k - c_var] = c * e
    return Polynomial(R, terms)


def multidegree(f: Polynomial):
    """Common multidegree of all terms, or None when f is zero or inhomogeneous."""
    if not f.terms:
        return None
    R = f.ring
    width = R.degree_width()
    seen = None
    for k in f.terms:
        exps = R.decode(k)
        d = tuple(sum(e * R.degrees[i][j] for i, e in enumerate(exps) if e) for j in range(width))
        if seen is None:
            seen = d
        elif d != seen:
            return None
    return seen


def degree_component(f: Polynomial, component: int):
    """Degree of f in one grading component, or None if not homogeneous in it."""
    if not f.terms:
        return None
    R = f.ring
    seen = None
    for k in f.terms:
        exps = R.decode(k)
        d = sum(e * R.degrees[i][component] for i, e in enumerate(exps) if e)
        if seen is None:
            seen = d
        elif d != seen:
            return None
    return seen


def max_degree_component(f: Polynomial, component: int = 0) -> int:
    R = f.ring
    return max(sum(e * R.degrees[i][component] for i, e in enumerate(R.decode(k)) if e)
               for k in f.terms)


def divide_exact(a: Polynomial, b: Polynomial) -> Polynomial:
    """a / b for polynomials where b divides a; raises InexactDivisionError otherwise."""
    if a.ring != b.ring:
        raise RingMismatchError("division across rings")
    if not b.terms:
        raise ZeroDivisionError("polynomial division by zero")
    R = a.ring
    lk = b.lead_key()
    inv = 1 / b.terms[lk]
    tail = [(k, c) for k, c in b.terms.items() if k != lk]
    p = dict(a.terms)
    q = {}
    while p:
        k = max(p)
        if not R.divides(lk, k):
            raise InexactDivisionError("polynomial division is not exact")
        c = p.pop(k) * inv
        s = k - lk
        q[s] = c
        for tk, tc in tail:
            nk = tk + s
            v = p.get(nk, 0) - c * tc
            if v:
                p[nk] = v
            else:
                p.pop(nk, None)
    return Polynomial(R, q)


# ---------------------------------------------------------------- maps and fractions


class RingMap:
    """Substitution homomorphism: source variable i goes to images[i]."""

    def __init__(self, source: PolyRing, target, images: Sequence[Polynomial]):
        if len(images) != source.nvars:
            raise ValueError("one image per source variable is required")
        amb = getattr(target, "ambient", target)
        self.source = source
        self.target = target
        self.images = [amb(g) if not isinstance(g, Polynomial) else g for g in images]
        for g in self.images:
            if g.ring != amb:
                raise RingMismatchError("image not in target ring")

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply_map(self, f)

    def __repr__(self):
        pairs = ", ".join(f"{v} -> {g}" for v, g in zip(self.source.names, self.images))
        return f"RingMap({pairs})"


def apply_map(phi: RingMap, f: Polynomial) -> Polynomial:
    if f.ring != phi.source:
        raise RingMismatchError("polynomial not in the map's source ring")
    amb = getattr(phi.target, "ambient", phi.target)
    powers: dict[tuple[int, int], Polynomial] = {}

    def power(i, e):
        p = powers.get((i, e))
        if p is None:
            p = phi.images[i] if e == 1 else power(i, e - 1) * phi.images[i]
            powers[(i, e)] = p
        return p

    result = amb.zero()
    for exps, c in f.items():
        term = amb.constant(c)
        for i, e in enumerate(exps):
            if e:
                term = term * power(i, e)
        result = result + term
    reduce = getattr(phi.target, "reduce", None)
    return reduce(result) if reduce else result


class Fraction:
    """num/den with both in one ambient polynomial ring."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial):
        if num.ring != den.ring:
            raise RingMismatchError("numerator and denominator in different rings")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    def reduced(self) -> "Fraction":
        """Divide out the polynomial gcd and make the denominator monic."""
        from .ideals import poly_gcd

        num, den = self.num, self.den
        if num.is_zero():
            return Fraction(num, den.ring.one())
        if not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num, den = divide_exact(num, g), divide_exact(den, g)
        lc = den.lead_coeff()
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        return Fraction(num, den)

    def cross_difference(self, other: "Fraction") -> Polynomial:
        return self.num * other.den - other.num * self.den

    def equals_mod(self, other: "Fraction", ideal) -> bool:
        """Cross-multiplication equality modulo an ideal (or exactly when ideal is None)."""
        d = self.cross_difference(other)
        return d.is_zero() if ideal is None else ideal.contains(d)

    def __eq__(self, other):
        return isinstance(other, Fraction) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        return format_fraction(self)

    def __repr__(self):
        return f"Fraction({self})"


def format_fraction(fr: Fraction) -> str:
    def wrap(p, den=False):
        s = str(p)
        if len(p.terms) > 1 or (den and not p.is_constant() and p.lead_coeff() != 1):
            return f"({s})"
        if s.startswith("-") and den:
            return f"({s})"
        return s

    if fr.den == 1:
        return str(fr.num)
    return f"{wrap(fr.num)}/{wrap(fr.den, den=True)}"
