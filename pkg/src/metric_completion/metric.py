"""Additive good metrics in a finitely presented normal form.

A metric has three zones per level n >= 1.  With lower edge distance
dL(n) and upper edge distance dU(n), a summand in degree i lies in

* the lower zone when i <= -dL(n), and must belong to L_n,
* the upper zone when i > dU(n), and must belong to U_n,
* the central zone otherwise, and must belong to C_n.

An absent edge means the zone is empty (equivalently, its chain is C).
Invariants: C_n <= L_n and C_n <= U_n, all chains descend, edge distances
are nonnegative and grow by at least one per level.  The metrics of the
form (edges, L = U = All, C) are the aisle / coaisle / t-structure windows
combined with a chain of thick subcategories; the extra zone data makes the
family closed under meets and joins.

Ball membership is tested degreewise.  Over Z the wide parts are Serre
subcategories and the test is exact; elsewhere a failing summand next to
an edge is reported as BoundaryUnknown.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from .errors import InvalidSchedule, MixedRings
from .fields import PointUniverse
from .indec import DynkinAn, IntegerRing, Kronecker
from .labels import PRIMES, LabelSet
from . import thick as T


# --- edge schedules ---------------------------------------------------------------

@dataclass(frozen=True)
class EdgeSchedule:
    """Edge distance d(n) for levels n >= 1: explicit prefix values, then
    base + step * n."""

    prefix: tuple = ()
    base: int = 0
    step: int = 1

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(x) for x in self.prefix))
        if self.step < 1:
            raise InvalidSchedule("edge step must be >= 1 (balls must be shift-stable)")
        vals = [self.value(n) for n in range(1, len(self.prefix) + 3)]
        if vals[0] < 0:
            raise InvalidSchedule("edge distances must be nonnegative")
        for a, b in zip(vals, vals[1:]):
            if b < a + 1:
                raise InvalidSchedule("edge distance must grow by >= 1 per level (shift-stability axiom)")
        pre = list(self.prefix)
        while pre and pre[-1] == self.base + self.step * len(pre):
            pre.pop()
        object.__setattr__(self, "prefix", tuple(pre))

    def value(self, n):
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.base + self.step * n

    def __str__(self):
        tail = _affine(self.base, self.step)
        if not self.prefix:
            return tail
        return "[" + ", ".join(map(str, self.prefix)) + "] then " + tail


def linear_edge(base=0, step=1):
    return EdgeSchedule((), base, step)


def _edge_op(a, b, pick):
    start = max(len(a.prefix), len(b.prefix)) + 1
    win, n0 = _affine_winner((a.base, a.step), (b.base, b.step), pick, start)
    pre = tuple(pick(a.value(n), b.value(n)) for n in range(1, n0))
    return EdgeSchedule(pre, *win)


def _affine_winner(a, b, pick, start):
    """The affine function (base, step) equal to pick(a, b) from some level
    n0 >= start on, and that n0.  The difference of two affine functions is
    monotone, so once the eventual winner wins it keeps winning."""
    if a[1] != b[1]:
        a_final = pick(a[1], b[1]) == a[1]
    else:
        a_final = pick(a[0], b[0]) == a[0]
    win, other = (a, b) if a_final else (b, a)
    n = start
    while pick(win[0] + win[1] * n, other[0] + other[1] * n) != win[0] + win[1] * n:
        n += 1
    return win, n


# --- chain schedules ------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: object

    def at(self, n):
        return self.value

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class LabelTail:
    """wrap(base ∪ {labels of index >= t0 + step * n}): PrimeTail over Z,
    TubeTail over the Kronecker algebra."""

    ring: object
    base: LabelSet
    t0: int
    step: int

    def threshold(self, n):
        return max(self.t0 + self.step * n, 0)

    def labels(self, n):
        # canonical label sets exclude only unenumerated labels, so the union
        # with a tail just lowers the tail
        b, t = self.base, self.threshold(n)
        return LabelSet(b.universe, t if b.tail is None else min(t, b.tail), b.rest, b.plus, b.minus)

    def at(self, n):
        return _tail_at(self, n)

    @property
    def name(self):
        return "PrimeTail" if isinstance(self.ring, IntegerRing) else "TubeTail"

    def __str__(self):
        if isinstance(self.ring, IntegerRing):
            idx = "p_(" + _affine(self.t0, self.step) + ")"
            tail = f"p >= {idx}"
        else:
            tail = f"index >= {_affine(self.t0, self.step)}"
        base = "" if self.base.is_empty() else f"{self.base} + "
        return f"{self.name}({base}{{{tail}}})"


@lru_cache(maxsize=4096)
def _tail_at(tail, n):
    return _wrap(tail.ring, tail.labels(n))


def _affine(b, s):
    lin = "n" if s == 1 else f"{s}n"
    if b == 0:
        return lin
    return f"{lin}+{b}" if b > 0 else f"{lin}-{-b}"


def _wrap(ring, labels):
    if isinstance(ring, IntegerRing):
        return T.torsion(labels, ring)
    return T.regular_part(ring, labels)


@dataclass(frozen=True)
class ChainSchedule:
    """Descending chain n -> C_n: explicit prefix (levels 1..k), then a tail."""

    ring: object
    prefix: tuple = ()
    tail: object = None

    def __post_init__(self):
        pre = tuple(self.prefix)
        tail = self.tail
        for d in pre + ((tail.value,) if isinstance(tail, Const) else ()):
            if d.ring != self.ring:
                raise MixedRings("chain entries over different rings")
        if isinstance(tail, LabelTail):
            pre, tail = _normalize_label_tail(pre, tail)
        object.__setattr__(self, "prefix", pre)
        object.__setattr__(self, "tail", tail)
        # descending check on the explicit part and into the tail
        for n in range(1, len(pre) + 1):
            if not T.leq(self.at(n + 1), self.at(n)):
                raise InvalidSchedule(f"chain is not descending at level {n} (balls must decrease)")
        pre = list(pre)
        while pre and pre[-1] == tail.at(len(pre)):
            pre.pop()
        object.__setattr__(self, "prefix", tuple(pre))

    def at(self, n):
        if n < 1:
            raise ValueError("levels start at 1")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.tail.at(n)

    @property
    def limit(self):
        if isinstance(self.tail, Const):
            return self.tail.value
        return _wrap(self.ring, self.tail.base)

    def stabilizes(self):
        return isinstance(self.tail, Const)

    def variant(self):
        if isinstance(self.tail, LabelTail):
            return self.tail.name
        return "FinitePrefixThenConstant" if self.prefix else "ConstantChain"

    def __str__(self):
        t = str(self.tail)
        if not self.prefix:
            return t
        return "[" + ", ".join(map(str, self.prefix)) + "] then " + t


def _normalize_label_tail(pre, tail):
    u = tail.base.universe
    if tail.step <= 0:
        raise InvalidSchedule("tail threshold must grow")
    stop = None  # threshold index from which the tail part adds nothing new
    if tail.base.has_tail:
        stop = tail.base._horizon()
    if u.enumerated_count is not None:
        stop = u.enumerated_count if stop is None else min(stop, u.enumerated_count)
    if stop is None:
        return pre, tail
    n = len(pre) + 1
    while tail.threshold(n) < stop:
        n += 1
    pre = pre + tuple(tail.at(m) for m in range(len(pre) + 1, n))
    return pre, Const(_wrap(tail.ring, tail.base))


def constant_chain(C):
    return ChainSchedule(C.ring, (), Const(C))


def prefix_chain(prefix, C):
    return ChainSchedule(C.ring, tuple(prefix), Const(C))


def prime_tail(base=(), offset=-1, step=1):
    """Torsion(base ∪ {p_i : i >= offset + step*n}) with p_0 = 2.

    The default is level n -> primes from the n-th prime on: level 1 is all
    primes, level 2 starts at 3, level 3 at 5, and so on.
    """
    ring = IntegerRing()
    b = base if isinstance(base, LabelSet) else LabelSet(PRIMES, plus=frozenset(base))
    return ChainSchedule(ring, (), LabelTail(ring, b, offset, step))


def tube_tail(ring, base=(), offset=-1, step=1):
    """RegularPart(base ∪ {points of index >= offset + step*n})."""
    u = PointUniverse(ring.field)
    b = base if isinstance(base, LabelSet) else LabelSet(u, plus=frozenset(base))
    return ChainSchedule(ring, (), LabelTail(ring, b, offset, step))


def _first(pred, start):
    n = start
    while not pred(n):
        n += 1
    return n


def _tail_op(a, b, op, start):
    """(tail, n0) with op(a.at(n), b.at(n)) == tail.at(n) for every n >= n0."""
    meet = op == "meet"
    f = T.meet if meet else T.join
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(f(a.value, b.value)), start
    if isinstance(a, Const):
        a, b = b, a
    ring = a.ring
    if isinstance(b, LabelTail):
        F, G = a.base, b.base
        if meet:
            # (F ∪ Ta) ∩ (G ∪ Tb) = (F ∩ G) ∪ T_max once the tails clear F and G
            hz_f, hz_g = F._horizon(), G._horizon()
            n0 = _first(lambda n: b.threshold(n) >= hz_f and a.threshold(n) >= hz_g, start)
            w, n0 = _affine_pick(a, b, max, n0)
            return LabelTail(ring, F & G, w.t0, w.step), n0
        w, n0 = _affine_pick(a, b, min, start)
        return LabelTail(ring, F | G, w.t0, w.step), n0
    D = b.value
    if D.kind == "zero":
        return (Const(D), start) if meet else (a, start)
    if D.kind == "all":
        return (a, start) if meet else (Const(D), start)
    if D.kind == "exceptional":
        return (Const(T.zero(ring)), start) if meet else (Const(T.everything_in(ring)), start)
    G = D.labels
    hz = G._horizon()
    after = _first(lambda n: a.threshold(n) >= hz, start)
    if meet:
        if G.has_tail:
            return LabelTail(ring, a.base & G, a.t0, a.step), after
        return Const(_wrap(ring, a.base & G)), after
    if G.has_tail:
        return Const(_wrap(ring, a.base | G)), after
    return LabelTail(ring, a.base | G, a.t0, a.step), start


def _affine_pick(a, b, pick, start):
    win, n0 = _affine_winner((a.t0, a.step), (b.t0, b.step), pick, start)
    return (a if win == (a.t0, a.step) else b), n0


def chain_op(A, B, op):
    if A.ring != B.ring:
        raise MixedRings("chains over different rings")
    f = T.meet if op == "meet" else T.join
    start = max(len(A.prefix), len(B.prefix)) + 1
    tail, n0 = _tail_op(A.tail, B.tail, op, start)
    pre = tuple(f(A.at(n), B.at(n)) for n in range(1, n0))
    return ChainSchedule(A.ring, pre, tail)


def chain_meet(A, B):
    return chain_op(A, B, "meet")


def chain_join(A, B):
    return chain_op(A, B, "join")


def chain_finer(A, B):
    """For every n there is m with A_m <= B_n."""
    if A.ring != B.ring:
        raise MixedRings("chains over different rings")
    if isinstance(A.tail, Const):
        return T.leq(A.tail.value, B.limit)
    F = A.tail.base
    if isinstance(B.tail, LabelTail):
        return F <= B.tail.base
    E = B.tail.value
    if E.kind == "all":
        return True
    if E.kind in ("torsion", "regular"):
        return F <= E.labels and E.labels.has_tail
    return False


# --- metrics ----------------------------------------------------------------------

class Verdict(Enum):
    IN = "In"
    OUT = "Out"
    BOUNDARY_UNKNOWN = "BoundaryUnknown"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class MetricNF:
    ring: object
    central: ChainSchedule
    lower: EdgeSchedule | None = None
    lower_chain: ChainSchedule | None = None
    upper: EdgeSchedule | None = None
    upper_chain: ChainSchedule | None = None
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        for side in ("lower", "upper"):
            edge, chain = getattr(self, side), getattr(self, side + "_chain")
            if edge is None:
                object.__setattr__(self, side + "_chain", None)
                continue
            if chain is None:
                chain = constant_chain(T.everything_in(self.ring))
            if chain.ring != self.ring:
                raise MixedRings("zone chains over different rings")
            if chain_meet(self.central, chain) != self.central:
                raise InvalidSchedule(f"central chain must lie inside the {side} chain at every level")
            if chain == self.central:
                object.__setattr__(self, side, None)
                chain = None
            object.__setattr__(self, side + "_chain", chain)
        if self.central.ring != self.ring:
            raise MixedRings("central chain over a different ring")

    # effective chains: an absent zone behaves like the central one
    @property
    def eff_lower(self):
        return self.lower_chain if self.lower is not None else self.central

    @property
    def eff_upper(self):
        return self.upper_chain if self.upper is not None else self.central

    def low(self, n):
        """Largest degree in the lower zone at level n (None: empty zone)."""
        return None if self.lower is None else -self.lower.value(n)

    def high(self, n):
        """Degrees above this are in the upper zone (None: empty zone)."""
        return None if self.upper is None else self.upper.value(n)

    def zone(self, n, i):
        lo, hi = self.low(n), self.high(n)
        if lo is not None and i <= lo:
            return "lower"
        if hi is not None and i > hi:
            return "upper"
        return "central"

    def zone_descriptor(self, n, i):
        z = self.zone(n, i)
        chain = {"lower": self.lower_chain, "upper": self.upper_chain, "central": self.central}[z]
        return chain.at(n)

    def is_spec_form(self):
        """Edges with L = U = All, i.e. a window plus one chain."""
        return all(c is None or c == constant_chain(T.everything_in(self.ring))
                   for c in (self.lower_chain, self.upper_chain))

    def __str__(self):
        if self.name:
            return self.name
        return normal_form_text(self)

    __repr__ = __str__


def normal_form_text(M):
    parts = []
    lo = str(M.lower) if M.lower is not None else None
    win_lo = "-inf" if lo is None else (f"-{lo}" if lo.replace("n", "").isdigit() or lo == "n" else f"-({lo})")
    win_hi = f"{M.upper}" if M.upper is not None else "+inf"
    parts.append(f"window ({win_lo}, {win_hi}]")
    parts.append(f"chain {M.central}")
    if M.lower is not None and M.lower_chain != constant_chain(T.everything_in(M.ring)):
        parts.append(f"lower {M.lower_chain}")
    if M.upper is not None and M.upper_chain != constant_chain(T.everything_in(M.ring)):
        parts.append(f"upper {M.upper_chain}")
    return "; ".join(parts)


def _check_ring(ring):
    if not isinstance(ring, (IntegerRing, Kronecker, DynkinAn)):
        raise MixedRings(f"metrics are not modeled over {ring}")


def mk_zoned(ring, central, lower=None, lower_chain=None, upper=None, upper_chain=None, name=None):
    _check_ring(ring)
    return MetricNF(ring, central, lower, lower_chain, upper, upper_chain, name)


def mk_nf(ring, chain, lower=None, upper=None, name=None):
    """Window metric: degrees <= -lower(n) and > upper(n) are free, the
    central degrees must lie in the chain."""
    return mk_zoned(ring, chain, lower, None, upper, None, name)


def mk_constant(C, name=None):
    return mk_nf(C.ring, constant_chain(C), name=name)


def mk_aisle(ring):
    return mk_nf(ring, constant_chain(T.zero(ring)), lower=linear_edge())


def mk_coaisle(ring):
    return mk_nf(ring, constant_chain(T.zero(ring)), upper=linear_edge())


def mk_t_structure(ring):
    return mk_nf(ring, constant_chain(T.zero(ring)), lower=linear_edge(), upper=linear_edge())


def mk_tail(ring=None, offset=-1, step=1):
    """The metric n -> <Z/p : p >= p_n> (or its tube analogue)."""
    ring = ring or IntegerRing()
    chain = prime_tail((), offset, step) if isinstance(ring, IntegerRing) else tube_tail(ring, (), offset, step)
    return mk_nf(ring, chain)


# --- balls ---------------------------------------------------------------------------

def ball_contains(M, n, X):
    if n < 1:
        raise ValueError("levels start at 1")
    if X.family is not None and X.family != M.ring.family:
        raise MixedRings(f"object over a different ring than {M.ring}")
    verdict = Verdict.IN
    for i, N in X.summands:
        D = M.zone_descriptor(n, i)
        if D.contains_module(N):
            continue
        if isinstance(M.ring, IntegerRing):
            return Verdict.OUT
        if M.zone(n, i - 1) == M.zone(n, i) == M.zone(n, i + 1):
            return Verdict.OUT
        verdict = Verdict.BOUNDARY_UNKNOWN
    return verdict


# --- lattice ------------------------------------------------------------------------

def _same(M, N):
    if M.ring != N.ring:
        raise MixedRings(f"metrics over {M.ring} and {N.ring}")


def _combine(M, N, op):
    _same(M, N)
    pick = max if op == "meet" else min
    out = {}
    for side in ("lower", "upper"):
        a, b = getattr(M, side), getattr(N, side)
        if a is None and b is None:
            out[side] = None
        elif a is None or b is None:
            out[side] = a or b
        else:
            out[side] = _edge_op(a, b, pick)
    C = chain_op(M.central, N.central, op)
    L = chain_op(M.eff_lower, N.eff_lower, op) if out["lower"] else None
    U = chain_op(M.eff_upper, N.eff_upper, op) if out["upper"] else None
    return MetricNF(M.ring, C, out["lower"], L, out["upper"], U)


def meet(M, N):
    return _combine(M, N, "meet")


def join(M, N):
    return _combine(M, N, "join")


def finer_leq(M, N):
    """M is finer than N: for every n there is m with B_m(M) ⊆ B_n(N)."""
    _same(M, N)
    return (chain_finer(M.central, N.central)
            and chain_finer(M.eff_lower, N.eff_lower)
            and chain_finer(M.eff_upper, N.eff_upper))


def equivalent(M, N):
    return finer_leq(M, N) and finer_leq(N, M)


def t_submetric(M):
    return meet(M, mk_t_structure(M.ring))


def kernel_B(M):
    """Intersection of all balls: every degree is eventually central."""
    return M.central.limit


def converges_uniformly(M):
    """M ~ M∞ ∨ B, which for normal forms means the central chain stabilizes."""
    return M.central.stabilizes()
