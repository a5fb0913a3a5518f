"""Coefficient fields, univariate polynomials over them, and points of P^1.

Elements are plain Python values: ``Fraction`` over the rationals and ints in
``range(q)`` over GF(q).  For a prime power q = p^k an element encodes the
coefficients (base p digits) of a polynomial modulo a fixed irreducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd

from sympy import factorint

from .errors import UnsupportedField


@dataclass(frozen=True)
class FieldDescriptor:
    kind: str  # "rational" | "finite" | "symbolic"
    q: int | None = None

    def __post_init__(self):
        if self.kind == "finite":
            if self.q is None or len(factorint(self.q)) != 1:
                raise ValueError(f"field order must be a prime power, got {self.q}")
        elif self.kind not in ("rational", "symbolic"):
            raise ValueError(f"unknown field kind {self.kind!r}")

    # --- cardinality --------------------------------------------------
    @property
    def is_finite(self):
        return self.kind == "finite"

    @property
    def is_uncountable(self):
        return self.kind == "symbolic"

    @property
    def supports_arithmetic(self):
        return self.kind != "symbolic"

    @property
    def characteristic(self):
        if self.kind == "finite":
            return _char(self.q)
        return 0

    @property
    def is_prime_field(self):
        return self.kind == "finite" and _char(self.q) == self.q

    def __str__(self):
        if self.kind == "finite":
            return f"GF({self.q})"
        return {"rational": "Q", "symbolic": "K(uncountable)"}[self.kind]

    __repr__ = __str__

    # --- arithmetic ---------------------------------------------------
    def _need_arith(self):
        if self.kind == "symbolic":
            raise UnsupportedField("element arithmetic is not available over a symbolic field")

    @property
    def zero(self):
        self._need_arith()
        return Fraction(0) if self.kind == "rational" else 0

    @property
    def one(self):
        self._need_arith()
        return Fraction(1) if self.kind == "rational" else 1

    def from_int(self, n):
        self._need_arith()
        if self.kind == "rational":
            return Fraction(n)
        p = self.characteristic
        return n % p  # prime subfield is encoded by the constant digit

    def add(self, a, b):
        if self.kind == "rational":
            return a + b
        self._need_arith()
        if self.q == self.characteristic:
            return (a + b) % self.q
        return _gf_tables(self.q).add(a, b)

    def neg(self, a):
        if self.kind == "rational":
            return -a
        self._need_arith()
        if self.q == self.characteristic:
            return (-a) % self.q
        return _gf_tables(self.q).neg(a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.kind == "rational":
            return a * b
        self._need_arith()
        if self.q == self.characteristic:
            return (a * b) % self.q
        return _gf_tables(self.q).mul(a, b)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "rational":
            return 1 / a
        self._need_arith()
        if self.q == self.characteristic:
            return pow(a, -1, self.q)
        return _gf_tables(self.q).inv(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a == 0

    def elements(self):
        if self.kind != "finite":
            raise UnsupportedField(f"{self} is infinite")
        return range(self.q)

    def coerce(self, value):
        """Interpret an int, Fraction or string as a field element."""
        self._need_arith()
        if self.kind == "rational":
            return Fraction(value)
        if isinstance(value, str):
            value = int(value)
        if isinstance(value, Fraction):
            if value.denominator != 1:
                return self.div(self.coerce(value.numerator), self.coerce(value.denominator))
            value = value.numerator
        if self.q == self.characteristic:
            return value % self.q
        if not 0 <= value < self.q:
            raise ValueError(f"GF({self.q}) elements are encoded as 0..{self.q - 1}")
        return value

    def fmt(self, a):
        return str(a)


@lru_cache(maxsize=None)
def _char(q):
    return next(iter(factorint(q)))


def Rational():
    return FieldDescriptor("rational")


def FiniteField(q):
    return FieldDescriptor("finite", q)


def SymbolicUncountable():
    return FieldDescriptor("symbolic")


class _GFTables:
    """Log/antilog tables for GF(p^k), k >= 2."""

    def __init__(self, q):
        (p, k), = factorint(q).items()
        self.p, self.k, self.q = p, k, q
        self.modulus = _first_irreducible_mod_p(p, k)
        self.exp = [0] * (2 * q)
        self.log = [0] * q
        for g in range(2, q):
            seen = self._powers(g)
            if seen is not None:
                break
        else:  # pragma: no cover - a primitive element always exists
            raise RuntimeError("no primitive element found")
        for i, e in enumerate(seen):
            self.exp[i] = e
            self.exp[i + q - 1] = e
            self.log[e] = i
        self._add = None
        if q <= 1024:
            self._add = [[self._add_digits(a, b) for b in range(q)] for a in range(q)]
        self._neg = [self._undigits([(-x) % p for x in self._digits(a)]) for a in range(q)]

    def _digits(self, a):
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds):
        return sum(d * self.p ** i for i, d in enumerate(ds))

    def _polymul(self, a, b):
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % self.p
        m = self.modulus  # monic, low to high, length k + 1
        for top in range(len(prod) - 1, self.k - 1, -1):
            c = prod[top]
            if c:
                for i in range(self.k + 1):
                    prod[top - self.k + i] = (prod[top - self.k + i] - c * m[i]) % self.p
        return self._undigits(prod[: self.k])

    def _powers(self, g):
        seen, e = [], 1
        for _ in range(self.q - 1):
            seen.append(e)
            e = self._polymul(e, g)
            if e == 1 and len(seen) < self.q - 1:
                return None
        return seen if e == 1 else None

    def _add_digits(self, a, b):
        da, db = self._digits(a), self._digits(b)
        return self._undigits([(x + y) % self.p for x, y in zip(da, db)])

    def add(self, a, b):
        if self._add is not None:
            return self._add[a][b]
        return self._add_digits(a, b)

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a):
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]


@lru_cache(maxsize=None)
def _gf_tables(q):
    return _GFTables(q)


def _first_irreducible_mod_p(p, k):
    """Lexicographically first monic irreducible of degree k over GF(p)."""
    fp = FiniteField(p)
    for tail in product(range(p), repeat=k):
        cand = tuple(tail) + (1,)
        if cand[0] == 0:
            continue
        if len(poly_factor(fp, cand)) == 1 and poly_factor(fp, cand)[0][1] == 1:
            return cand
    raise RuntimeError("no irreducible polynomial found")  # pragma: no cover


# --- univariate polynomials, tuples of coefficients low -> high ---------

def poly_trim(F, a):
    a = list(a)
    while a and F.is_zero(a[-1]):
        a.pop()
    return tuple(a)


def poly_add(F, a, b):
    n = max(len(a), len(b))
    z = F.zero
    return poly_trim(F, [F.add(a[i] if i < len(a) else z, b[i] if i < len(b) else z) for i in range(n)])


def poly_neg(F, a):
    return tuple(F.neg(c) for c in a)


def poly_sub(F, a, b):
    return poly_add(F, a, poly_neg(F, b))


def poly_mul(F, a, b):
    if not a or not b:
        return ()
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if F.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_trim(F, out)


def poly_divmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [F.zero] * max(len(a) - len(b) + 1, 0)
    inv_lead = F.inv(b[-1])
    while len(a) >= len(b) and a:
        c = F.mul(a[-1], inv_lead)
        shift = len(a) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = F.sub(a[shift + i], F.mul(c, y))
        a = list(poly_trim(F, a))
    return poly_trim(F, q), tuple(a)


def poly_monic(F, a):
    inv = F.inv(a[-1])
    return tuple(F.mul(c, inv) for c in a)


def poly_pow(F, a, e):
    out = (F.one,)
    for _ in range(e):
        out = poly_mul(F, out, a)
    return out


def poly_eval(F, a, x):
    acc = F.zero
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def poly_fmt(F, a, var="t"):
    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if F.is_zero(c):
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        cs = F.fmt(c)
        if mono and cs == "1":
            s = mono
        elif mono and cs == "-1":
            s = "-" + mono
        else:
            s = cs + mono
        terms.append(s)
    if not terms:
        return "0"
    out = terms[0]
    for s in terms[1:]:
        out += s if s.startswith("-") else "+" + s
    return out


@lru_cache(maxsize=None)
def _monic_irreducibles(F, d):
    """All monic irreducible polynomials of degree d over a finite field."""
    smaller = [g for e in range(1, d // 2 + 1) for g in _monic_irreducibles(F, e)]
    out = []
    for tail in product(F.elements(), repeat=d):
        cand = tuple(tail) + (F.one,)
        if d > 1 and F.is_zero(cand[0]):
            continue
        if all(poly_divmod(F, cand, g)[1] for g in smaller):
            out.append(cand)
    return tuple(out)


def poly_factor(F, a):
    """Factor a nonconstant polynomial into monic irreducibles.

    Returns a sorted list of ``(factor, multiplicity)``.
    """
    a = poly_trim(F, a)
    if len(a) < 2:
        return []
    a = poly_monic(F, a)
    if F.kind == "rational":
        return _factor_rational(a)
    out = {}
    d = 1
    while 2 * d <= len(a) - 1:
        for g in _monic_irreducibles(F, d):
            while True:
                quo, rem = poly_divmod(F, a, g)
                if rem:
                    break
                out[g] = out.get(g, 0) + 1
                a = quo
        d += 1
    if len(a) > 1:
        out[a] = out.get(a, 0) + 1
    return sorted(out.items(), key=lambda kv: (len(kv[0]), [str(c) for c in kv[0]]))


def _factor_rational(a):
    from sympy import Poly, QQ, Symbol

    t = Symbol("t")
    p = Poly([c for c in reversed(a)], t, domain=QQ)
    _, facs = p.factor_list()
    out = []
    for f, m in facs:
        cs = [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(f.all_coeffs())]
        lead = cs[-1]
        out.append((tuple(c / lead for c in cs), m))
    return sorted(out, key=lambda kv: (len(kv[0]), [str(c) for c in kv[0]]))


# --- points of the projective line ---------------------------------------

@dataclass(frozen=True)
class ProjPoint:
    """A closed point of P^1.

    ``coords`` holds the normalized representative (1:k) or (0:1) of a
    rational point; ``label`` a formal point over a symbolic field; ``poly``
    a monic irreducible of degree >= 2 in the affine chart (1:t).
    """

    coords: tuple | None = None
    label: str | None = None
    poly: tuple | None = None

    @property
    def degree(self):
        return len(self.poly) - 1 if self.poly is not None else 1

    @property
    def is_infinity(self):
        return self.coords is not None and self.coords[0] == 0

    def sort_key(self):
        if self.coords is not None:
            return (0, 0 if self.is_infinity else 1, _num_key(self.coords[1]))
        if self.label is not None:
            return (1, _label_key(self.label))
        return (2, len(self.poly), tuple(_num_key(c) for c in self.poly))

    def __str__(self):
        if self.coords is not None:
            return f"({self.coords[0]}:{self.coords[1]})"
        if self.label is not None:
            return self.label
        return "[" + _poly_str(self.poly) + "]"

    __repr__ = __str__


def _num_key(c):
    return (float(c), str(c))


def _label_key(s):
    if s[:1] == "t" and s[1:].isdigit():
        return (0, int(s[1:]), s)
    return (1, 0, s)


def _poly_str(poly):
    # field-agnostic formatting; coefficients print through str()
    class _Fmt:
        is_zero = staticmethod(lambda c: c == 0)
        fmt = staticmethod(str)

    return poly_fmt(_Fmt, poly)


def point(F, x, y):
    """Normalized rational point (x:y) of P^1 over F."""
    x, y = F.coerce(x), F.coerce(y)
    if F.is_zero(x):
        if F.is_zero(y):
            raise ValueError("(0:0) is not a point")
        return ProjPoint(coords=(F.zero, F.one))
    return ProjPoint(coords=(F.one, F.div(y, x)))


def formal_point(tag):
    return ProjPoint(label=str(tag))


def closed_point(F, poly):
    """Closed point given by a monic irreducible polynomial in t = y/x."""
    poly = poly_monic(F, poly_trim(F, [F.coerce(c) for c in poly]))
    facs = poly_factor(F, poly)
    if len(facs) != 1 or facs[0][1] != 1:
        raise ValueError(f"{poly_fmt(F, poly)} is not irreducible")
    if len(poly) == 2:
        return point(F, 1, F.neg(poly[0]))
    return ProjPoint(poly=poly)


def point_polynomial(F, pt):
    """Minimal polynomial of the point in the affine chart, None at infinity."""
    if pt.poly is not None:
        return pt.poly
    if pt.coords is None:
        raise UnsupportedField("formal points have no coordinates")
    if pt.is_infinity:
        return None
    return (F.neg(pt.coords[1]), F.one)


# --- enumerations ----------------------------------------------------------

@lru_cache(maxsize=None)
def _rationals_of_height(h):
    if h == 1:
        return (Fraction(-1), Fraction(0), Fraction(1))
    vals = set()
    for a in range(-h, h + 1):
        if gcd(abs(a), h) == 1:
            vals.add(Fraction(a, h))
    for b in range(1, h):
        if gcd(h, b) == 1:
            vals.add(Fraction(h, b))
            vals.add(Fraction(-h, b))
    return tuple(sorted(vals))


@lru_cache(maxsize=None)
def _height_offset(h):
    # index of the first point (1:k) with height h; index 0 is (0:1)
    if h == 1:
        return 1
    return _height_offset(h - 1) + len(_rationals_of_height(h - 1))


@lru_cache(maxsize=None)
def _rational_point_index(k):
    h = max(abs(k.numerator), k.denominator)
    return _height_offset(h) + _rationals_of_height(h).index(k)


@lru_cache(maxsize=None)
def _rational_point_at(i):
    if i == 0:
        return ProjPoint(coords=(Fraction(0), Fraction(1)))
    h = 1
    while _height_offset(h + 1) <= i:
        h += 1
    return ProjPoint(coords=(Fraction(1), _rationals_of_height(h)[i - _height_offset(h)]))


@dataclass(frozen=True)
class PointUniverse:
    """Closed points of P^1 over a field with a fixed partial enumeration.

    Enumerated: the rational points ((0:1) first, then by height over Q, by
    encoding over GF(q)) or the formal labels t0, t1, ... over a symbolic
    field.  Everything else (higher degree points, other labels) is
    unenumerated.
    """

    field: FieldDescriptor

    @property
    def enumerated_count(self):
        return self.field.q + 1 if self.field.is_finite else None

    @property
    def unenumerated_cardinality(self):
        return "uncountable" if self.field.is_uncountable else "countable"

    def index(self, x):
        if self.field.is_uncountable:
            if x.label is not None and x.label[:1] == "t" and x.label[1:].isdigit():
                if str(int(x.label[1:])) == x.label[1:]:
                    return int(x.label[1:])
            return None
        if x.coords is None:
            return None
        if x.is_infinity:
            return 0
        if self.field.is_finite:
            return 1 + x.coords[1]
        return _rational_point_index(Fraction(x.coords[1]))

    def at(self, i):
        if self.field.is_uncountable:
            return formal_point(f"t{i}")
        if self.field.is_finite:
            if i == 0:
                return ProjPoint(coords=(0, 1))
            return ProjPoint(coords=(1, i - 1))
        return _rational_point_at(i)

    def sort_key(self, x):
        return x.sort_key()

    def fmt(self, x):
        return str(x)

    def check(self, x):
        if not isinstance(x, ProjPoint):
            raise TypeError(f"{x!r} is not a point")
        if self.field.is_uncountable and x.label is None:
            raise UnsupportedField("points over a symbolic field are formal labels")
        if not self.field.is_uncountable and x.label is not None:
            raise UnsupportedField("formal labels need a symbolic field")


@dataclass(frozen=True)
class PrimeUniverse:
    """Rational primes enumerated in increasing order."""

    enumerated_count = None
    unenumerated_cardinality = None

    def index(self, p):
        return _primepi(p) - 1

    def at(self, i):
        return _nth_prime(i + 1)

    def index_of_bound(self, value):
        """Index of the first prime >= value."""
        return _primepi(max(value, 1) - 1)

    def sort_key(self, p):
        return p

    def fmt(self, p):
        return str(p)

    def check(self, p):
        if not isinstance(p, int) or not _isprime(p):
            raise ValueError(f"{p!r} is not a prime")


@lru_cache(maxsize=None)
def _primepi(n):
    from sympy import primepi

    return int(primepi(n))


@lru_cache(maxsize=None)
def _nth_prime(n):
    from sympy import prime

    return int(prime(n))


@lru_cache(maxsize=None)
def _isprime(n):
    from sympy import isprime

    return bool(isprime(n))
