"""Finitely presented thick subcategories and their lattice.

A thick subcategory of the bounded derived category of a hereditary ring is
determined by its wide part: the modules it contains.  Descriptors:

* over Z: Zero, Torsion(S) for a nonempty prime set S, All;
* over the Kronecker algebra: Zero, RegularPart(D) for a nonempty point set
  D, Exceptional(E) for an exceptional module E, All;
* over A_n: the explicit set of interval modules in the wide part.

Over the Kronecker algebra this list is complete: a thick subcategory
containing two non-isomorphic exceptional modules, or an exceptional module
and a regular one, is everything.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (MixedRings, NotCountablyGenerated, UnsupportedRing,
                     WrongRing)
from .fields import PointUniverse
from .indec import (DynkinAn, IntegerRing, Interval, Kronecker,
                    KroneckerColimit, LocalizedFree, LocalizedIntegerRing,
                    Preinjective, Preprojective, Regular, ZFree, ZTorsion,
                    dynkin_catalog, hom_invariants, is_exceptional_sequence,
                    is_formal, localized_ring_name, ring_accepts)
from .labels import PRIMES, LabelSet, empty, everything


@dataclass(frozen=True)
class ThickDescriptor:
    ring: object
    kind: str  # zero | torsion | regular | exceptional | intervals | all
    labels: LabelSet | None = None
    sequence: tuple = ()
    members: frozenset = frozenset()

    # --- display --------------------------------------------------------------
    def __str__(self):
        if self.kind == "zero":
            return "0"
        if self.kind == "all":
            return "All"
        if self.kind == "torsion":
            return f"Torsion({self.labels})"
        if self.kind == "regular":
            return f"RegularPart({self.labels})"
        if self.kind == "exceptional":
            return "Exceptional(" + ", ".join(str(E) for E in self.sequence) + ")"
        return "Thick{" + ", ".join(str(M) for M in sorted(self.members, key=lambda M: M.sort_key())) + "}"

    __repr__ = __str__

    def is_zero(self):
        return self.kind == "zero"

    def is_all(self):
        return self.kind == "all"

    def contains_module(self, M):
        """Whether the indecomposable module M lies in the wide part."""
        if M.family != self.ring.family:
            raise MixedRings(f"{M} is not a module over {self.ring}")
        if is_formal(M) or self.kind == "zero":
            return False
        if self.kind == "all":
            return ring_accepts(self.ring, M)
        if self.kind == "torsion":
            return isinstance(M, ZTorsion) and M.p in self.labels
        if self.kind == "regular":
            return isinstance(M, Regular) and M.point in self.labels
        if self.kind == "exceptional":
            return M in self.sequence
        return M in self.members

    def contains(self, X):
        return all(self.contains_module(M) for _, M in X.summands)

    def __le__(self, other):
        return leq(self, other)


# --- construction -------------------------------------------------------------------

def _point_universe(ring):
    return PointUniverse(ring.field)


def zero(ring):
    return ThickDescriptor(ring, "zero")


def everything_in(ring):
    return ThickDescriptor(ring, "all")


def torsion(S, ring=None):
    """Torsion modules supported at the prime set S (all shifts and sums)."""
    ring = ring or IntegerRing()
    if not isinstance(ring, IntegerRing):
        raise WrongRing("torsion descriptors live over Z")
    if not isinstance(S, LabelSet):
        S = LabelSet(PRIMES, plus=frozenset(S))
    return zero(ring) if S.is_empty() else ThickDescriptor(ring, "torsion", labels=S)


def torsion_all():
    return torsion(everything(PRIMES))


def regular_part(ring, D):
    """Regular modules in the tubes over the point set D."""
    if not isinstance(ring, Kronecker):
        raise WrongRing("regular descriptors live over the Kronecker algebra")
    u = _point_universe(ring)
    if not isinstance(D, LabelSet):
        D = LabelSet(u, plus=frozenset(D))
    if D.universe != u:
        raise MixedRings("point set over a different field")
    return zero(ring) if D.is_empty() else ThickDescriptor(ring, "regular", labels=D)


def regular_all(ring):
    return regular_part(ring, everything(_point_universe(ring)))


def exceptional(ring, seq):
    """Thick closure of an exceptional sequence of length at most 2."""
    if not isinstance(ring, Kronecker):
        raise WrongRing("exceptional descriptors are modeled over the Kronecker algebra")
    seq = tuple(seq)
    if len(seq) > 2:
        raise ValueError("exceptional sequences over the Kronecker algebra have length <= 2")
    if not is_exceptional_sequence(seq, ring):
        raise ValueError(f"({', '.join(map(str, seq))}) is not an exceptional sequence")
    if not seq:
        return zero(ring)
    if len(seq) == 2:
        return everything_in(ring)
    return ThickDescriptor(ring, "exceptional", sequence=seq)


def intervals(ring, modules):
    """Thick closure of a set of interval modules over A_n."""
    if not isinstance(ring, DynkinAn):
        raise WrongRing("interval descriptors live over A_n")
    closed = _dynkin_closure(ring.n, frozenset(modules))
    return _dynkin_descriptor(ring, closed)


def _dynkin_descriptor(ring, members):
    if not members:
        return zero(ring)
    if len(members) == len(dynkin_catalog(ring.n)):
        return everything_in(ring)
    return ThickDescriptor(ring, "intervals", members=frozenset(members))


def thick_closure(ring, modules):
    """Smallest descriptor whose wide part contains the given indecomposables."""
    modules = list(modules)
    out = zero(ring)
    if isinstance(ring, DynkinAn):
        return intervals(ring, modules)
    for M in modules:
        if isinstance(ring, IntegerRing):
            d = everything_in(ring) if isinstance(M, ZFree) else torsion([M.p])
        elif isinstance(M, Regular):
            d = regular_part(ring, [M.point])
        else:
            d = exceptional(ring, [M])
        out = join(out, d)
    return out


# --- wide part enumeration for A_n ---------------------------------------------------

def _dynkin_members(C):
    if C.kind == "zero":
        return frozenset()
    if C.kind == "all":
        return frozenset(dynkin_catalog(C.ring.n))
    return C.members


@lru_cache(maxsize=None)
def _dynkin_right_perp(n, members):
    return frozenset(N for N in dynkin_catalog(n)
                     if all(not any(hom_invariants(M, N)) for M in members))


@lru_cache(maxsize=None)
def _dynkin_left_perp(n, members):
    return frozenset(M for M in dynkin_catalog(n)
                     if all(not any(hom_invariants(M, N)) for N in members))


@lru_cache(maxsize=None)
def _dynkin_closure(n, members):
    # thick subcategories of D^b(A_n) are generated by exceptional sequences,
    # hence admissible, so thick(S) = left perp of right perp of S
    for M in members:
        if not isinstance(M, Interval) or M.j > n:
            raise MixedRings(f"{M} is not a module over A{n}")
    return _dynkin_left_perp(n, _dynkin_right_perp(n, members))


# --- order and lattice -----------------------------------------------------------

def _same_ring(a, b):
    if a.ring != b.ring:
        raise MixedRings(f"descriptors over {a.ring} and {b.ring}")


def leq(a, b):
    _same_ring(a, b)
    if a.kind == "zero" or b.kind == "all":
        return True
    if b.kind == "zero" or a.kind == "all":
        return False
    if a.kind != b.kind:
        return False
    if a.kind in ("torsion", "regular"):
        return a.labels <= b.labels
    if a.kind == "exceptional":
        return a.sequence == b.sequence
    return a.members <= b.members


def equal(a, b):
    return leq(a, b) and leq(b, a)


def join(a, b):
    _same_ring(a, b)
    if a.kind == "zero" or b.kind == "all":
        return b
    if b.kind == "zero" or a.kind == "all":
        return a
    if isinstance(a.ring, DynkinAn):
        return _dynkin_descriptor(a.ring, _dynkin_closure(a.ring.n, a.members | b.members))
    if a.kind == b.kind == "torsion":
        return ThickDescriptor(a.ring, "torsion", labels=a.labels | b.labels)
    if a.kind == b.kind == "regular":
        return ThickDescriptor(a.ring, "regular", labels=a.labels | b.labels)
    if a.kind == b.kind == "exceptional" and a.sequence == b.sequence:
        return a
    # two distinct exceptionals, or an exceptional and a regular module
    return everything_in(a.ring)


def meet(a, b):
    _same_ring(a, b)
    if a.kind == "zero" or b.kind == "all":
        return a
    if b.kind == "zero" or a.kind == "all":
        return b
    if isinstance(a.ring, DynkinAn):
        return _dynkin_descriptor(a.ring, a.members & b.members)
    if a.kind == b.kind == "torsion":
        return torsion(a.labels & b.labels, a.ring)
    if a.kind == b.kind == "regular":
        return regular_part(a.ring, a.labels & b.labels)
    if a.kind == b.kind == "exceptional" and a.sequence == b.sequence:
        return a
    return zero(a.ring)


# --- Hom / Ext vanishing against a whole descriptor ----------------------------

_KRONECKER_INJECTIVES = (Preinjective(0), Preinjective(1))


def hom_vanishes(C, N):
    """Hom(W, N) = 0 for every W in the wide part of C."""
    return _vanishes(C, N, 0)


def ext_vanishes(C, N):
    """Ext^1(W, N) = 0 for every W in the wide part of C."""
    return _vanishes(C, N, 1)


def _vanishes(C, N, which):
    if N.family != C.ring.family:
        raise MixedRings(f"{N} is not over {C.ring}")
    k = C.kind
    if k == "zero":
        return True
    if k == "exceptional":
        # Hom/Ext vanishing against generators passes to their thick closure
        if isinstance(N, KroneckerColimit):
            # E_D is a colimit of preprojectives: Hom(P, E) != 0 = Ext(P, E),
            # Hom(I, E) = 0 != Ext(I, E)
            return all((which == 1) == isinstance(E, Preprojective) for E in C.sequence)
        return all(not tuple(hom_invariants(E, N))[which] for E in C.sequence)
    if k == "intervals":
        return all(not tuple(hom_invariants(M, N))[which] for M in C.members)
    if isinstance(C.ring, DynkinAn):
        return all(not tuple(hom_invariants(M, N))[which] for M in dynkin_catalog(C.ring.n))
    if isinstance(C.ring, IntegerRing):
        if k == "all":
            # Hom(Z, N) != 0 for N != 0; Ext^1(-, N) = 0 iff N is divisible
            return which == 1 and isinstance(N, LocalizedFree) and N.inverted.is_all()
        S = C.labels
        if isinstance(N, ZTorsion):
            return N.p not in S
        if isinstance(N, ZFree):
            return which == 0
        return which == 0 or S <= N.inverted
    # Kronecker
    if k == "all":
        return which == 1 and N in _KRONECKER_INJECTIVES
    D = C.labels
    if isinstance(N, Regular):
        return N.point not in D
    if isinstance(N, Preprojective):
        return which == 0
    if isinstance(N, Preinjective):
        return which == 1
    if isinstance(N, KroneckerColimit):
        return which == 0 or D <= N.points
    raise TypeError(f"unexpected module {N}")


def is_perpendicular(C, N):
    return hom_vanishes(C, N) and ext_vanishes(C, N)


# --- perpendicular categories ------------------------------------------------------

def _kronecker_right_partner(E):
    """The exceptional E' with E^perp = thick(E')."""
    bound = E.n + 3
    cands = [X for m in range(bound) for X in (Preprojective(m), Preinjective(m))
             if not any(hom_invariants(E, X))]
    if len(cands) != 1:
        raise AssertionError(f"expected one perpendicular partner of {E}, found {cands}")
    return cands[0]


def right_perp_in_S(C):
    """{X : Hom(Σ^j W, X) = 0 for all j and all W in C}."""
    ring = C.ring
    if C.kind == "zero":
        return everything_in(ring)
    if C.kind == "all":
        return zero(ring)
    if isinstance(ring, IntegerRing):
        return torsion(C.labels.complement(), ring)
    if isinstance(ring, DynkinAn):
        return _dynkin_descriptor(ring, _dynkin_right_perp(ring.n, C.members))
    if C.kind == "regular":
        return regular_part(ring, C.labels.complement())
    return ThickDescriptor(ring, "exceptional", sequence=(_kronecker_right_partner(C.sequence[0]),))


def torsion_class(ring):
    """The descriptor written 𝔗 over Z and ℜ over the Kronecker algebra."""
    if isinstance(ring, IntegerRing):
        return torsion_all()
    if isinstance(ring, Kronecker):
        return regular_all(ring)
    raise UnsupportedRing(f"no torsion class modeled for {ring}")


# --- countability and localisation ----------------------------------------------

def is_countably_generated(C):
    if C.kind == "regular":
        return C.labels.cardinality() != "uncountable"
    return True


@dataclass(frozen=True)
class LocalisationModel:
    """The ring (or generator list) whose derived category is S/C, idempotent
    completed.  ``kind`` is one of: ring, localized, zero, kronecker,
    perpendicular."""

    kind: str
    base: object
    name: str
    inverted: LabelSet | None = None
    generators: tuple = ()
    perp: ThickDescriptor | None = None

    def __str__(self):
        return self.name


def localisation_model(C):
    if not is_countably_generated(C):
        raise NotCountablyGenerated(f"{C} is not countably generated")
    ring = C.ring
    if isinstance(ring, IntegerRing):
        if C.kind == "zero":
            return LocalisationModel("ring", ring, "Z", inverted=empty(PRIMES))
        if C.kind == "all":
            return LocalisationModel("zero", ring, "0")
        return LocalisationModel("localized", LocalizedIntegerRing(C.labels),
                                 localized_ring_name(C.labels), inverted=C.labels)
    if isinstance(ring, Kronecker):
        if C.kind == "zero":
            return LocalisationModel("ring", ring, str(ring))
        if C.kind == "all":
            return LocalisationModel("zero", ring, "0")
        if C.kind == "regular":
            gens = (KroneckerColimit(C.labels), f"tubes != {_fmt_points(C.labels)}")
            return LocalisationModel("kronecker", ring, f"{ring}_{C.labels}", inverted=C.labels,
                                     generators=gens)
        return LocalisationModel("perpendicular", ring, f"perp({C})", perp=right_perp_in_S(C))
    raise UnsupportedRing(f"no localisation model for {ring}")


def _fmt_points(D):
    if D.is_finite() and len(D.elements()) == 1:
        return str(D.elements()[0])
    return str(D)
