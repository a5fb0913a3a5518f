"""Generated normal-form metric families and a bounded semantic check of
``finer_leq`` used by the lattice property tests.

The semantic check never calls the lattice code: it samples single summands
(degree, module) and evaluates ball membership from the zone definition.
Degrees beyond every edge and labels beyond every threshold and explicit
label behave uniformly, so one representative of each suffices and the
comparison of ball_m(M) with ball_n(N) is exact for the given pair (m, n).
"""
from __future__ import annotations

from hypothesis import strategies as st

from metric_completion import metric as Mt
from metric_completion import thick as T
from metric_completion.fields import PointUniverse, Rational, closed_point
from metric_completion.indec import (IntegerRing, Kronecker, Preinjective, Preprojective, Regular,
                                     ZFree, ZTorsion)
from metric_completion.labels import LabelSet, cofinite, finite, primes, primes_from

Z = IntegerRing()
Q = Rational()
KQ = Kronecker(Q)
PU = PointUniverse(Q)
PRIME_U = primes().universe


# --- descriptors ---------------------------------------------------------------------

def z_descriptors():
    small = st.sets(st.sampled_from([2, 3, 5, 7]), max_size=3)
    return st.one_of(
        st.just(T.zero(Z)),
        small.map(lambda s: T.torsion(primes(sorted(s)))),
        st.tuples(st.sampled_from([3, 5, 11]), small).map(lambda a: T.torsion(primes_from(a[0], sorted(a[1])))),
        st.sampled_from([2, 3]).map(lambda p: T.torsion(cofinite(PRIME_U, [p]))),
        st.just(T.torsion_all()),
        st.just(T.everything_in(Z)),
    )


def k_descriptors():
    pts = st.sets(st.integers(0, 4).map(PU.at), max_size=3)
    return st.one_of(
        st.just(T.zero(KQ)),
        pts.map(lambda s: T.regular_part(KQ, finite(PU, s))),
        st.tuples(st.integers(1, 5), pts).map(lambda a: T.regular_part(KQ, LabelSet(PU, tail=a[0], plus=frozenset(a[1])))),
        st.integers(0, 2).map(lambda i: T.regular_part(KQ, cofinite(PU, [PU.at(i)]))),
        st.just(T.regular_all(KQ)),
        st.sampled_from([Preprojective(0), Preprojective(1), Preprojective(3), Preinjective(0)])
          .map(lambda E: T.exceptional(KQ, (E,))),
        st.just(T.everything_in(KQ)),
    )


def _descending(ring, C, extras):
    """Prefix P_k = C ∨ X_k ∨ X_{k+1} ∨ ... is descending and above C."""
    out, acc = [], C
    for X in reversed(extras):
        acc = T.join(acc, X)
        out.append(acc)
    return list(reversed(out))


@st.composite
def chains(draw, ring):
    desc = z_descriptors() if ring == Z else k_descriptors()
    kind = draw(st.sampled_from(["const", "prefix", "tail"]))
    if kind == "const":
        return Mt.constant_chain(draw(desc))
    if kind == "prefix":
        C = draw(desc)
        return Mt.prefix_chain(_descending(ring, C, draw(st.lists(desc, min_size=1, max_size=2))), C)
    offset = draw(st.integers(-1, 2))
    step = draw(st.integers(1, 2))
    if ring == Z:
        base = draw(st.sets(st.sampled_from([2, 3, 5]), max_size=2))
        return Mt.prime_tail(sorted(base), offset, step)
    base = draw(st.sets(st.integers(0, 3).map(PU.at), max_size=2))
    return Mt.tube_tail(KQ, base, offset, step)


@st.composite
def edges(draw):
    if draw(st.booleans()):
        return None
    step = draw(st.integers(1, 2))
    pre, v = [], draw(st.integers(0, 2))
    for _ in range(draw(st.integers(0, 2))):
        pre.append(v)
        v += draw(st.integers(1, 3))
    base = draw(st.integers(0, 2))
    if pre:
        base = max(base, pre[-1] + 1 - step * (len(pre) + 1))
    return Mt.EdgeSchedule(tuple(pre), base, step)


@st.composite
def metrics(draw, ring):
    C = draw(chains(ring))
    lo, up = draw(edges()), draw(edges())
    L = Mt.chain_join(C, draw(chains(ring))) if lo is not None and draw(st.booleans()) else None
    U = Mt.chain_join(C, draw(chains(ring))) if up is not None and draw(st.booleans()) else None
    return Mt.mk_zoned(ring, C, lo, L, up, U)


# --- semantic oracle --------------------------------------------------------------------

def _chains_of(M):
    return [c for c in (M.central, M.lower_chain, M.upper_chain) if c is not None]


def _edge_values(M, n):
    return [e.value(n) for e in (M.lower, M.upper) if e is not None]


def _label_indices(M, n):
    idx = set()
    for c in _chains_of(M):
        for D in [c.at(n)] + list(c.prefix):
            L = D.labels
            if L is None:
                continue
            if L.tail is not None:
                idx |= {L.tail - 1, L.tail}
            idx |= {i for i in (L.universe.index(x) for x in L.plus | L.minus) if i is not None}
        if isinstance(c.tail, Mt.LabelTail):
            t = c.tail.threshold(n)
            idx |= {t - 1, t}
    return idx


def sample(M, m, N, n):
    ring = M.ring
    reach = max(_edge_values(M, m) + _edge_values(N, n) + [0]) + 2
    degrees = range(-reach, reach + 1)
    idx = _label_indices(M, m) | _label_indices(N, n) | set(range(6))
    far = max(idx) + 3
    idx = sorted(i for i in idx | {far} if i >= 0)
    if ring == Z:
        mods = [ZFree()] + [ZTorsion(PRIME_U.at(i), 1) for i in idx]
    else:
        mods = [Regular(PU.at(i)) for i in idx] + [Regular(closed_point(Q, [1, 0, 1]))]
        mods += [Preprojective(k) for k in range(4)] + [Preinjective(k) for k in range(2)]
    return [(i, X) for i in degrees for X in mods]


def member(M, n, i, X):
    lo = None if M.lower is None else -M.lower.value(n)
    hi = None if M.upper is None else M.upper.value(n)
    if lo is not None and i <= lo:
        D = M.lower_chain.at(n)
    elif hi is not None and i > hi:
        D = M.upper_chain.at(n)
    else:
        D = M.central.at(n)
    return D.contains_module(X)


def semantic_level(M, N, n, mmax):
    """Smallest m <= mmax with ball_m(M) ⊆ ball_n(N), or None."""
    for m in range(1, mmax + 1):
        if all(member(N, n, i, X) for i, X in sample(M, m, N, n) if member(M, m, i, X)):
            return m
    return None


def semantic_finer(M, N, levels=6, mmax=24):
    return all(semantic_level(M, N, n, mmax) is not None for n in range(1, levels + 1))
