"""Completions of the bounded derived category with respect to a metric.

Decision procedure, for a normal-form metric M with kernel B = ∩ B_n:

* case I (M ~ M∞ ∨ B and B countably generated): the completion is the
  derived category of the universal localisation killing B; over the
  Kronecker algebra with B exceptional this is the perpendicular B^⊥;
* case II: the completion is B^⊥ ∩ 𝔗 over Z, B^⊥ ∩ ℜ over the Kronecker
  algebra, computed as a thick descriptor.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import thick as T
from .errors import MixedRings, UnsupportedRing
from .indec import (IntegerRing, Kronecker, KroneckerColimit, LocalizedFree,
                    Regular, ZFree, ZTorsion, localized_ring_name)
from .labels import PRIMES, LabelSet, empty
from .metric import converges_uniformly, kernel_B
from .metric import LabelTail


@dataclass(frozen=True)
class CategoryDescriptor:
    """variant: DerivedOfLocalizedZ | KroneckerLocalisation | ThickInsideS |
    PerpOfExceptional | ZeroCategory."""

    variant: str
    ring: object
    labels: LabelSet | None = None
    thick: T.ThickDescriptor | None = None
    sequence: tuple = ()
    generators: tuple = ()

    def __str__(self):
        v = self.variant
        if v == "ZeroCategory":
            return "0"
        if v == "DerivedOfLocalizedZ":
            return f"D^b(mod {localized_ring_name(self.labels)})"
        if v == "ThickInsideS":
            return f"ThickInsideS({_thick_name(self.thick)})"
        if v == "PerpOfExceptional":
            return "PerpOfExceptional(" + ", ".join(map(str, self.sequence)) + ")"
        return f"KroneckerLocalisation({self.labels})"

    __repr__ = __str__

    def generator_names(self):
        """Display names of the listed generators."""
        out = []
        for g in self.generators:
            out.append("E" if isinstance(g, KroneckerColimit) else str(g))
        return out


def _thick_name(C):
    if C.kind == "torsion" and C.labels.is_all():
        return "Torsion(all)"
    if C.kind == "regular" and C.labels.is_all():
        return "RegularPart(all)"
    return str(C)


def zero_category(ring):
    return CategoryDescriptor("ZeroCategory", ring)


def derived_of_localized(S):
    return CategoryDescriptor("DerivedOfLocalizedZ", IntegerRing(), labels=S)


def thick_inside(C):
    if C.is_zero():
        return zero_category(C.ring)
    return CategoryDescriptor("ThickInsideS", C.ring, thick=C)


def kronecker_localisation(ring, D):
    gens = (KroneckerColimit(D), "tubes != " + (str(D.elements()[0]) if D.is_finite() and len(D.elements()) == 1 else str(D)))
    return CategoryDescriptor("KroneckerLocalisation", ring, labels=D, generators=gens)


def perp_of_exceptional(B):
    return CategoryDescriptor("PerpOfExceptional", B.ring, sequence=B.sequence, thick=T.right_perp_in_S(B))


def is_member(cat, X):
    """Membership oracle; conservative for KroneckerLocalisation."""
    v = cat.variant
    if v == "ZeroCategory":
        return X.is_zero()
    if X.family is not None and X.family != cat.ring.family:
        raise MixedRings(f"object over a different ring than {cat.ring}")
    for _, N in X.summands:
        if not _member_module(cat, N):
            return False
    return True


def _member_module(cat, N):
    v = cat.variant
    if v == "DerivedOfLocalizedZ":
        S = cat.labels
        if S.is_empty():
            return isinstance(N, (ZFree, ZTorsion))
        if isinstance(N, LocalizedFree):
            return N.inverted == S
        return isinstance(N, ZTorsion) and N.p not in S
    if v == "ThickInsideS":
        return cat.thick.contains_module(N)
    if v == "PerpOfExceptional":
        if isinstance(N, KroneckerColimit):
            return False
        return T.is_perpendicular(T.exceptional(cat.ring, cat.sequence), N)
    # KroneckerLocalisation: the generator E_D and the tubes outside D
    if isinstance(N, KroneckerColimit):
        return N.points == cat.labels
    return isinstance(N, Regular) and N.point not in cat.labels


# --- reports -----------------------------------------------------------------

@dataclass(frozen=True)
class CompletionReport:
    case: str
    kernel: T.ThickDescriptor
    countably_generated: bool
    converges_uniformly: bool
    category: CategoryDescriptor
    evidence: tuple = ()

    def to_dict(self):
        d = {
            "case": self.case,
            "kernel": str(self.kernel),
            "countablyGenerated": self.countably_generated,
            "convergesUniformly": self.converges_uniformly,
            "category": str(self.category),
            "evidence": list(self.evidence),
        }
        if self.category.generators:
            d["generators"] = self.category.generator_names()
        return d


def classify(ring, M):
    if not isinstance(ring, (IntegerRing, Kronecker)):
        raise UnsupportedRing(f"the classifier handles Z and the Kronecker algebra, not {ring}")
    if M.ring != ring:
        raise MixedRings(f"metric over {M.ring}, ring {ring}")
    B = kernel_B(M)
    cg = T.is_countably_generated(B)
    cu = converges_uniformly(M)
    ev = [f"kernel: B = intersection of the central chain = {B}"]
    if cu:
        ev.append(f"central chain stabilizes at B from level {len(M.central.prefix) + 1}, so M ~ M∞ ∨ B")
    else:
        tail = M.central.tail
        what = tail.name if isinstance(tail, LabelTail) else "chain"
        ev.append(f"central chain is a {what} that never stabilizes, so M is not equivalent to M∞ ∨ B")
    if isinstance(ring, IntegerRing):
        ev.append("B is countably generated: Spec(Z) is countable")
    elif cg:
        ev.append("B is countably generated" + (" (point set is countable)" if B.kind == "regular" else ""))
    else:
        ev.append(f"B is not countably generated: {B.labels} is uncountable")
    if cu and cg:
        cat = _case_one(ring, B, ev)
        case = "I"
    else:
        P = T.meet(T.right_perp_in_S(B), T.torsion_class(ring))
        ev.append(f"case II: completion = B^perp ∩ {'𝔗' if isinstance(ring, IntegerRing) else 'ℜ'} = {P}")
        cat = thick_inside(P)
        case = "II"
    return CompletionReport(case, B, cg, cu, cat, tuple(ev))


def _case_one(ring, B, ev):
    if isinstance(ring, IntegerRing):
        if B.is_all():
            ev.append("case I: B = All, the localisation is the zero ring")
            return zero_category(ring)
        S = empty(PRIMES) if B.is_zero() else B.labels
        ev.append(f"case I: universal localisation Z -> {localized_ring_name(S)} inverts the primes of B")
        return derived_of_localized(S)
    if B.is_all():
        ev.append("case I: B = All, the completion is zero")
        return zero_category(ring)
    if B.is_zero():
        ev.append("case I: B = 0, the completion is the category itself")
        return thick_inside(T.everything_in(ring))
    if B.kind == "exceptional":
        cat = perp_of_exceptional(B)
        ev.append(f"case I: B is generated by an exceptional sequence; completion = B^perp = {cat.thick}")
        return cat
    ev.append(f"case I: localisation at the tubes {B.labels}; generators E (colimit of the"
              " preprojective chain) and the remaining tubes")
    return kronecker_localisation(ring, B.labels)


# --- compact support -------------------------------------------------------------

@dataclass(frozen=True)
class CompactSupport:
    index: int | None
    horizon: int
    certified: bool = True

    @property
    def present(self):
        return self.index is not None


def _label_horizon(ring, X):
    """Index past which no label tail level changes any vanishing test on X."""
    from .fields import PointUniverse

    h = 0
    u = PRIMES if isinstance(ring, IntegerRing) else (PointUniverse(ring.field) if isinstance(ring, Kronecker) else None)
    if u is None:
        return 0
    for _, N in X.summands:
        if isinstance(N, ZTorsion):
            h = max(h, u.index(N.p) + 1)
        elif isinstance(N, Regular):
            i = u.index(N.point)
            h = max(h, 0 if i is None else i + 1)
        elif isinstance(N, LocalizedFree):
            h = max(h, N.inverted._horizon())
        elif isinstance(N, KroneckerColimit):
            h = max(h, N.points._horizon())
    return h


def certified_horizon(X, M):
    """Level from which the vanishing tests on X no longer change."""
    b = X.bounds()
    if b is None:
        return 1
    lo, hi = b
    width = hi - lo + 1
    offsets = [e.base for e in (M.lower, M.upper) if e is not None]
    h = 2 * width + max(offsets + [0])
    # every relevant degree lo-1 .. hi+1 central
    n = 1
    while ((M.lower is not None and -M.lower.value(n) >= lo - 1)
           or (M.upper is not None and M.upper.value(n) < hi + 1)):
        n += 1
    h = max(h, n)
    chains = [M.central, M.lower_chain, M.upper_chain]
    lab = _label_horizon(M.ring, X)
    for c in chains:
        if c is None:
            continue
        h = max(h, len(c.prefix) + 1)
        if isinstance(c.tail, LabelTail):
            m = len(c.prefix) + 1
            while c.tail.threshold(m) < lab:
                m += 1
            h = max(h, m)
    return h


def vanishing_at(X, M, n):
    for c, N in X.summands:
        if not T.hom_vanishes(M.zone_descriptor(n, c), N):
            return False
        if not T.ext_vanishes(M.zone_descriptor(n, c + 1), N):
            return False
    return True


def compact_support_index(X, M, horizon=None):
    """Smallest n with Hom(B_n, X) = 0, searched up to a certified horizon."""
    if X.family is not None and X.family != M.ring.family:
        raise MixedRings("object and metric over different rings")
    cert = certified_horizon(X, M)
    h = cert if horizon is None else horizon
    for n in range(1, h + 1):
        if vanishing_at(X, M, n):
            return CompactSupport(n, h, True)
    return CompactSupport(None, h, h >= cert)
