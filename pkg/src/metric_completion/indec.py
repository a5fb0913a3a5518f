"""Catalog of indecomposable modules with closed-form Hom/Ext invariants.

Supported rings: the integers, the Kronecker algebra over a field (quiver
2 => 1, maps A and B), and linearly oriented A_n (arrows i -> i+1).  Dimension
vectors for the Kronecker quiver are ordered (vertex 2, vertex 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from sympy import factorint

from .errors import (InjectiveArgument, MixedRings, NotFinitelyGenerated,
                     ProjectiveArgument, UnsupportedRing, WrongRing)
from .fields import FieldDescriptor, ProjPoint
from .labels import LabelSet, PRIMES

INFINITE = math.inf


# --- rings ------------------------------------------------------------------

@dataclass(frozen=True)
class IntegerRing:
    family = "Z"

    def __str__(self):
        return "Z"


@dataclass(frozen=True)
class LocalizedIntegerRing:
    inverted: LabelSet
    family = "Z"

    def __str__(self):
        return localized_ring_name(self.inverted)


@dataclass(frozen=True)
class Kronecker:
    field: FieldDescriptor
    family = "kronecker"

    def __str__(self):
        return f"Kronecker({self.field})"


@dataclass(frozen=True)
class DynkinAn:
    n: int
    family = "dynkin"

    def __post_init__(self):
        if not 1 <= self.n <= 8:
            raise UnsupportedRing("DynkinAn supports 1 <= n <= 8")

    def __str__(self):
        return f"A{self.n}"


def localized_ring_name(S):
    if S.is_empty():
        return "Z"
    if S.is_all():
        return "Q"
    if S.is_finite():
        return "Z[" + ",".join(f"1/{p}" for p in S.elements()) + "]"
    return f"Z[1/p : p in {S}]"


# --- indecomposables -----------------------------------------------------------

@dataclass(frozen=True)
class ZFree:
    family = "Z"

    def sort_key(self):
        return (0, 0, 0)

    def __str__(self):
        return "Z"


@dataclass(frozen=True)
class ZTorsion:
    p: int
    k: int
    family = "Z"

    def __post_init__(self):
        PRIMES.check(self.p)
        if self.k < 1:
            raise ValueError("ZTorsion needs k >= 1")

    def sort_key(self):
        return (1, self.p, self.k)

    def __str__(self):
        return f"Z/{self.p ** self.k}"


@dataclass(frozen=True)
class LocalizedFree:
    """The Z-module Z[S^-1]; the colimit of a multiplication chain."""

    inverted: LabelSet
    family = "Z"

    def sort_key(self):
        return (2, str(self.inverted), 0)

    def __str__(self):
        return localized_ring_name(self.inverted)


def localized_free(S):
    return ZFree() if S.is_empty() else LocalizedFree(S)


@dataclass(frozen=True)
class Preprojective:
    n: int
    family = "kronecker"

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("Preprojective needs n >= 0")

    def sort_key(self):
        return (0, self.n, ())

    def __str__(self):
        return f"P{self.n}"


@dataclass(frozen=True)
class Preinjective:
    n: int
    family = "kronecker"

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("Preinjective needs n >= 0")

    def sort_key(self):
        return (2, self.n, ())

    def __str__(self):
        return f"I{self.n}"


@dataclass(frozen=True)
class Regular:
    point: ProjPoint
    k: int = 1
    family = "kronecker"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("Regular needs quasi-length >= 1")

    def sort_key(self):
        return (1, self.k, self.point.sort_key())

    def __str__(self):
        inner = str(self.point)
        if inner.startswith("(") and inner.endswith(")"):
            inner = inner[1:-1]
        elif inner.startswith("[") and inner.endswith("]"):
            inner = inner[1:-1]
        return f"R({inner})" if self.k == 1 else f"R({inner};{self.k})"


@dataclass(frozen=True)
class KroneckerColimit:
    """Formal colimit E_D of a preprojective chain whose cones run over D."""

    points: LabelSet
    family = "kronecker"

    def sort_key(self):
        return (3, 0, str(self.points))

    def __str__(self):
        return f"E{self.points}"


@dataclass(frozen=True)
class Interval:
    i: int
    j: int
    family = "dynkin"

    def __post_init__(self):
        if not 1 <= self.i <= self.j:
            raise ValueError("Interval needs 1 <= i <= j")

    def sort_key(self):
        return (0, self.i, self.j)

    def __str__(self):
        return f"M({self.i},{self.j})"


FORMAL = (LocalizedFree, KroneckerColimit)


def is_formal(X):
    return isinstance(X, FORMAL)


def ring_accepts(ring, X):
    """Whether X is an indecomposable of the given ring's catalog."""
    if ring.family != X.family:
        return False
    if isinstance(ring, DynkinAn):
        return X.j <= ring.n
    if isinstance(X, Regular) and isinstance(ring, Kronecker):
        symbolic = ring.field.is_uncountable
        return (X.point.label is not None) == symbolic
    return True


# --- abelian groups ------------------------------------------------------------

@dataclass(frozen=True)
class AbelianGroup:
    """rank copies of Z (or of Z[S^-1] when ``inverted`` is set) plus
    primary cyclic torsion, stored as sorted (p, k) pairs."""

    rank: int = 0
    torsion: tuple = ()
    inverted: LabelSet | None = None

    @staticmethod
    def from_invariants(factors):
        rank, tors = 0, []
        for d in factors:
            d = abs(int(d))
            if d == 0:
                rank += 1
            elif d > 1:
                tors.extend(factorint(d).items())
        return AbelianGroup(rank, tuple(sorted(tors)))

    @staticmethod
    def cyclic(p, k):
        return AbelianGroup(0, ((p, k),))

    def __add__(self, other):
        inv = self.inverted if self.rank else other.inverted
        if self.rank and other.rank and self.inverted != other.inverted:
            raise ValueError("cannot add free parts over different localizations")
        return AbelianGroup(self.rank + other.rank, tuple(sorted(self.torsion + other.torsion)),
                            inv if (self.rank + other.rank) else None)

    def is_zero(self):
        return self.rank == 0 and not self.torsion

    def __bool__(self):
        return not self.is_zero()

    def order(self):
        if self.rank:
            return INFINITE
        return math.prod(p ** k for p, k in self.torsion)

    def invariant_factors(self):
        """Cyclic decomposition d_1 | d_2 | ... (free summands as 0)."""
        by_p = {}
        for p, k in self.torsion:
            by_p.setdefault(p, []).append(k)
        n = max((len(v) for v in by_p.values()), default=0)
        out = [1] * n
        for p, ks in by_p.items():
            ks = sorted(ks)
            for idx, k in enumerate(ks):
                out[n - len(ks) + idx] *= p ** k
        return out + [0] * self.rank

    def __str__(self):
        parts = []
        if self.rank:
            base = "Z" if self.inverted is None else localized_ring_name(self.inverted)
            parts.append(base if self.rank == 1 else f"{base}^{self.rank}")
        parts += [f"Z/{p ** k}" for p, k in self.torsion]
        return " + ".join(parts) if parts else "0"


ZERO_GROUP = AbelianGroup()


@dataclass(frozen=True)
class HomExt:
    """Hom and Ext^1; groups over Z, dimensions over a field."""

    hom: object
    ext: object

    def __iter__(self):
        return iter((self.hom, self.ext))


# --- closed forms ----------------------------------------------------------------

def _check_pair(X, Y, ring):
    if X.family != Y.family:
        raise MixedRings(f"{X} and {Y} live over different rings")
    if ring is not None and not (ring_accepts(ring, X) and ring_accepts(ring, Y)):
        raise MixedRings(f"{X}, {Y} are not both modules over {ring}")


def hom_invariants(X, Y, ring=None):
    """Exact Hom and Ext^1 between two indecomposables."""
    _check_pair(X, Y, ring)
    if is_formal(X):
        raise NotFinitelyGenerated(f"Hom out of the formal colimit {X} is not computed")
    if X.family == "Z":
        return _hom_Z(X, Y)
    if X.family == "kronecker":
        return HomExt(*_hom_kronecker(X, Y))
    return HomExt(*_hom_dynkin(X, Y))


def hom_dim(X, Y, ring=None):
    return hom_invariants(X, Y, ring).hom


def ext_dim(X, Y, ring=None):
    return hom_invariants(X, Y, ring).ext


def _hom_Z(X, Y):
    if isinstance(X, ZFree):
        if isinstance(Y, ZFree):
            return HomExt(AbelianGroup(1), ZERO_GROUP)
        if isinstance(Y, ZTorsion):
            return HomExt(AbelianGroup.cyclic(Y.p, Y.k), ZERO_GROUP)
        return HomExt(AbelianGroup(1, (), Y.inverted), ZERO_GROUP)
    # X = Z/p^a
    if isinstance(Y, ZFree):
        return HomExt(ZERO_GROUP, AbelianGroup.cyclic(X.p, X.k))
    if isinstance(Y, ZTorsion):
        if X.p != Y.p:
            return HomExt(ZERO_GROUP, ZERO_GROUP)
        g = AbelianGroup.cyclic(X.p, min(X.k, Y.k))
        return HomExt(g, g)
    # Y = Z[S^-1]: Hom vanishes, Ext^1 = Z[S^-1] / p^a
    ext = ZERO_GROUP if X.p in Y.inverted else AbelianGroup.cyclic(X.p, X.k)
    return HomExt(ZERO_GROUP, ext)


def point_degree(X):
    return X.point.degree


def _hom_kronecker(X, Y):
    if isinstance(Y, KroneckerColimit):
        return _hom_into_colimit(X, Y)
    d = dim_vector(X)
    e = dim_vector(Y)
    chi = _euler_kronecker(d, e)
    if isinstance(X, Regular) and isinstance(Y, Regular):
        if X.point != Y.point:
            return 0, 0
        v = X.point.degree * min(X.k, Y.k)
        return v, v
    # hom vanishes against the direction P -> R -> I
    rank = {Preprojective: 0, Regular: 1, Preinjective: 2}
    rx, ry = rank[type(X)], rank[type(Y)]
    if rx > ry:
        return 0, -chi
    if rx < ry:
        return chi, 0
    # same preprojective or preinjective component: one of hom/ext vanishes
    return (chi, 0) if chi >= 0 else (0, -chi)


def _hom_into_colimit(X, E):
    if isinstance(X, Regular):
        return 0, (0 if X.point in E.points else X.point.degree * X.k)
    if E.points.is_empty():  # the chain is constant, E_{} = P0
        return _hom_kronecker(X, Preprojective(0))
    if isinstance(X, Preprojective):
        return INFINITE, 0
    return 0, INFINITE


def _hom_dynkin(X, Y):
    h = int(Y.i <= X.i <= Y.j <= X.j)
    return h, h - euler_form(dim_vector(X), dim_vector(Y), DynkinAn(max(X.j, Y.j)))


# --- dimension vectors, Euler form, defect, AR translate -----------------------

def dim_vector(X, n=None):
    if isinstance(X, Preprojective):
        return (X.n, X.n + 1)
    if isinstance(X, Preinjective):
        return (X.n + 1, X.n)
    if isinstance(X, Regular):
        d = X.point.degree * X.k
        return (d, d)
    if isinstance(X, Interval):
        n = X.j if n is None else n
        return tuple(int(X.i <= v <= X.j) for v in range(1, n + 1))
    raise WrongRing(f"{X} has no dimension vector")


def _euler_kronecker(d, e):
    return d[1] * e[1] + d[0] * e[0] - 2 * d[0] * e[1]


def euler_form(d, e, ring):
    """<d, e> = hom - ext on modules of these dimension vectors."""
    if isinstance(ring, Kronecker):
        return _euler_kronecker(d, e)
    if isinstance(ring, DynkinAn):
        n = max(len(d), len(e))
        d = tuple(d) + (0,) * (n - len(d))
        e = tuple(e) + (0,) * (n - len(e))
        return sum(x * y for x, y in zip(d, e)) - sum(d[v] * e[v + 1] for v in range(n - 1))
    raise WrongRing("the Euler form is defined for quiver algebras only")


def defect(d):
    """d(vertex 2) - d(vertex 1); negative on preprojectives."""
    return d[0] - d[1]


def tau(X, ring=None):
    """Auslander-Reiten translate."""
    if isinstance(X, Regular):
        return X
    if isinstance(X, Preprojective):
        if X.n < 2:
            raise ProjectiveArgument(f"{X} is projective")
        return Preprojective(X.n - 2)
    if isinstance(X, Preinjective):
        return Preinjective(X.n + 2)
    if isinstance(X, Interval):
        n = ring.n if ring is not None else None
        if n is None:
            raise WrongRing("tau on A_n needs the ring")
        if X.j == n:
            raise ProjectiveArgument(f"{X} is projective")
        return Interval(X.i + 1, X.j + 1)
    raise WrongRing(f"tau is not defined for {X}")


def tau_inverse(X, ring=None):
    if isinstance(X, Regular):
        return X
    if isinstance(X, Preprojective):
        return Preprojective(X.n + 2)
    if isinstance(X, Preinjective):
        if X.n < 2:
            raise InjectiveArgument(f"{X} is injective")
        return Preinjective(X.n - 2)
    if isinstance(X, Interval):
        if X.i == 1:
            raise InjectiveArgument(f"{X} is injective")
        return Interval(X.i - 1, X.j - 1)
    raise WrongRing(f"tau is not defined for {X}")


def is_exceptional(X, ring=None):
    if X.family == "Z":
        raise WrongRing("exceptional objects are defined for field algebras")
    h, e = hom_invariants(X, X, ring)
    return h == 1 and e == 0


def is_exceptional_sequence(seq, ring=None):
    seq = list(seq)
    if not all(is_exceptional(X, ring) for X in seq):
        return False
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            h, e = hom_invariants(seq[j], seq[i], ring)
            if h or e:
                return False
    return True


# --- catalogs ------------------------------------------------------------------

def kronecker_catalog(points, max_total_dim, include_closed=()):
    """Indecomposables of total dimension <= max_total_dim at the given points."""
    out = []
    n = 0
    while 2 * n + 1 <= max_total_dim:
        out += [Preprojective(n), Preinjective(n)]
        n += 1
    for pt in list(points) + list(include_closed):
        k = 1
        while 2 * pt.degree * k <= max_total_dim:
            out.append(Regular(pt, k))
            k += 1
    return out


def dynkin_catalog(n):
    return [Interval(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]


def z_catalog(prime_powers):
    out = [ZFree()]
    for q in prime_powers:
        (p, k), = factorint(q).items()
        out.append(ZTorsion(p, k))
    return out


def prime_powers_upto(n):
    return [q for q in range(2, n + 1) if len(factorint(q)) == 1]


for _cls in (IntegerRing, LocalizedIntegerRing, Kronecker, DynkinAn, ZFree, ZTorsion,
             LocalizedFree, Preprojective, Preinjective, Regular, KroneckerColimit,
             Interval, AbelianGroup):
    _cls.__repr__ = _cls.__str__
