"""Cauchy sequences: construction, bounded-horizon certification,
trivialization and homotopy colimits for the supported families."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from sympy import factorint

from . import thick as T
from .derived import (ZERO, ModuleMap, SplitObject, canonical_preprojective_map,
                      cone_of_module_map, identity_map, k0_class, shift)
from .errors import (BoundsExceeded, UnsupportedFamily, UnsupportedStart,
                     UnverifiableWitness, WitnessLost)
from .indec import (IntegerRing, Kronecker, KroneckerColimit, Preprojective,
                    Regular, ZFree, ZTorsion, dim_vector, is_formal, localized_free)
from .fields import PointUniverse
from .labels import LabelSet, finite, primes
from .linalg import Mat
from .metric import Verdict, ball_contains


# --- witnesses ----------------------------------------------------------------------

@dataclass(frozen=True)
class ModuleMapWitness:
    """A module map acting on the summands in one degree; everything else is
    carried along by the identity."""

    map: ModuleMap
    degree: int = 0

    def moving(self):
        return Counter((self.degree, M) for M in self.map.source), Counter((self.degree, N) for N in self.map.target)

    def cone(self, src, tgt):
        return shift(cone_of_module_map(self.map), -self.degree)


@dataclass(frozen=True)
class MultiplicationWitness:
    """Multiplication by k on an entry made of copies of Z."""

    k: int

    def __post_init__(self):
        if self.k == 0:
            raise ValueError("multiplication by 0 is not a sequence map here")

    def cone(self, src, tgt):
        k = abs(self.k)
        if k == 1:
            return ZERO
        return SplitObject(tuple((d, ZTorsion(p, e)) for d, _ in src.summands for p, e in factorint(k).items()))


@dataclass(frozen=True)
class FormalConeWitness:
    """A map known only through its declared cone."""

    cone_object: SplitObject

    def cone(self, src, tgt):
        _check_formal_cone(src, tgt, self.cone_object)
        return self.cone_object


def _check_formal_cone(src, tgt, cone):
    a, b, c = (_as_tuple(k0_class(X)) for X in (src, tgt, cone))
    if None in (a, b, c):
        raise UnverifiableWitness("declared cone involves objects without a Grothendieck class")
    n = max(len(a), len(b), len(c))
    a, b, c = ((v + (0,) * n)[:n] for v in (a, b, c))
    diff = tuple(y - x for x, y in zip(a, b))
    if diff != c:
        raise UnverifiableWitness(f"declared cone {cone} has class {c}, expected {diff}")
    bs = [o.bounds() for o in (src, tgt) if o.bounds()]
    cb = cone.bounds()
    if cb and bs:
        lo = min(x for x, _ in bs) - 1
        hi = max(y for _, y in bs)
        if cb[0] < lo or cb[1] > hi:
            raise UnverifiableWitness(f"declared cone {cone} lies outside degrees [{lo}, {hi}]")


def _as_tuple(v):
    return (v,) if isinstance(v, int) else v


# --- sequences --------------------------------------------------------------------------

@dataclass(frozen=True)
class ObjectSequence:
    entries: tuple
    maps: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        object.__setattr__(self, "maps", tuple(self.maps))
        if len(self.maps) != len(self.entries) - 1:
            raise ValueError("a sequence with k+1 entries needs k maps")
        for n, w in enumerate(self.maps):
            _check_shape(self.entries[n], self.entries[n + 1], w, n + 1)

    def __len__(self):
        return len(self.maps)

    def cones(self):
        return [w.cone(self.entries[n], self.entries[n + 1]) for n, w in enumerate(self.maps)]

    def __str__(self):
        parts = [str(self.entries[0])]
        for w, E in zip(self.maps, self.entries[1:]):
            parts.append(f"-{_witness_label(w)}-> {E}")
        return " ".join(parts)


def _witness_label(w):
    if isinstance(w, MultiplicationWitness):
        return f"*{w.k}"
    if isinstance(w, FormalConeWitness):
        return "f"
    return "m"


def _check_shape(src, tgt, w, n):
    if isinstance(w, ModuleMapWitness):
        mv_s, mv_t = w.moving()
        rest_s = src.multiset() - mv_s
        rest_t = tgt.multiset() - mv_t
        if (src.multiset() - rest_s != mv_s or tgt.multiset() - rest_t != mv_t
                or rest_s != rest_t):
            raise ValueError(f"map {n} does not match its source and target entries")
    elif isinstance(w, MultiplicationWitness):
        if src != tgt or any(not isinstance(M, ZFree) for _, M in src.summands):
            raise ValueError(f"multiplication witness {n} needs equal Z-free entries")
    elif not isinstance(w, FormalConeWitness):
        raise TypeError(f"unknown witness {w!r}")


def sequence(entries, maps):
    return ObjectSequence(tuple(entries), tuple(maps))


def constant_sequence(X, length, ring):
    """X = X = X = ... with identity witnesses."""
    groups = {}
    for d, M in X.summands:
        groups.setdefault(d, []).append(M)
    if not groups:
        return ObjectSequence((X,) * (length + 1), (FormalConeWitness(ZERO),) * length)
    d, mods = next(iter(groups.items()))
    w = ModuleMapWitness(identity_map(ring, mods), d)
    return ObjectSequence((X,) * (length + 1), (w,) * length)


# --- certificates -----------------------------------------------------------------------

@dataclass(frozen=True)
class BallMembership:
    """Verdicts of one cone against the balls 1..horizon."""

    verdicts: tuple

    def at(self, m):
        return self.verdicts[m - 1]


@dataclass(frozen=True)
class CauchyCertificate:
    horizon: int
    stabilization: dict
    cone_witnesses: tuple
    ok = True

    def replay(self, M):
        """Recheck every recorded membership claim."""
        for n, cone, _ in self.cone_witnesses:
            for m in range(1, self.horizon + 1):
                if self.stabilization[m] <= n and ball_contains(M, m, cone) != Verdict.IN:
                    return False
        return True


@dataclass(frozen=True)
class CauchyFailure:
    level: int
    index: int
    cone: SplitObject
    verdict: Verdict
    ok = False


def is_cauchy(seq, M, horizon):
    """Bounded check: every ball m <= horizon eventually contains the cones
    of the maps n -> n+1 for n up to the horizon."""
    if horizon < 1:
        raise ValueError("horizon must be positive")
    if len(seq) < horizon:
        raise BoundsExceeded(f"sequence has {len(seq)} maps, horizon {horizon}")
    cones = [seq.maps[n].cone(seq.entries[n], seq.entries[n + 1]) for n in range(horizon)]
    table = [[ball_contains(M, m, c) for m in range(1, horizon + 1)] for c in cones]
    stab = {}
    for m in range(1, horizon + 1):
        N = horizon + 1
        while N > 1 and table[N - 2][m - 1] == Verdict.IN:
            N -= 1
        if N == horizon + 1:
            return CauchyFailure(m, horizon, cones[-1], table[-1][m - 1])
        stab[m] = N
    wit = tuple((n + 1, c, BallMembership(tuple(table[n]))) for n, c in enumerate(cones))
    return CauchyCertificate(horizon, stab, wit)


# --- trivialization -------------------------------------------------------------------

def _strip(seq, drop):
    entries = [SplitObject(tuple(s for s in E.summands if not drop(*s))) for E in seq.entries]
    maps = []
    for n, w in enumerate(seq.maps):
        src, tgt = entries[n], entries[n + 1]
        if isinstance(w, ModuleMapWitness):
            maps.append(_project(w, drop))
        elif isinstance(w, MultiplicationWitness):
            maps.append(w if src.summands else FormalConeWitness(ZERO))
        else:
            cone = SplitObject(tuple(s for s in w.cone_object.summands if not drop(*s)))
            try:
                _check_formal_cone(src, tgt, cone)
            except UnverifiableWitness as e:
                raise WitnessLost(f"map {n + 1}: {e}") from None
            maps.append(FormalConeWitness(cone))
    try:
        return ObjectSequence(tuple(entries), tuple(maps))
    except ValueError as e:
        raise WitnessLost(str(e)) from None


def _project(w, drop):
    f, d = w.map, w.degree
    keep_s = [j for j, M in enumerate(f.source) if not drop(d, M)]
    keep_t = [i for i, N in enumerate(f.target) if not drop(d, N)]
    if len(keep_s) == len(f.source) and len(keep_t) == len(f.target):
        return w
    src = tuple(f.source[j] for j in keep_s)
    tgt = tuple(f.target[i] for i in keep_t)
    try:
        if isinstance(f.ring, IntegerRing):
            data = tuple(tuple(f.data[i][j] for j in keep_s) for i in keep_t)
        else:
            data = _kronecker_blocks(f, keep_s, keep_t)
        return ModuleMapWitness(ModuleMap(f.ring, src, tgt, data), d)
    except Exception as e:
        raise WitnessLost(f"projected map is not a module map: {e}") from None


def _kronecker_blocks(f, keep_s, keep_t):
    F = f.ring.field
    out = []
    for v in range(2):
        def idx(mods, keep):
            offs, acc = [], 0
            for M in mods:
                offs.append(acc)
                acc += dim_vector(M)[v]
            return [offs[k] + r for k in keep for r in range(dim_vector(mods[k])[v])]
        rows, cols = idx(f.target, keep_t), idx(f.source, keep_s)
        m = f.data[v]
        out.append(Mat(len(rows), len(cols), tuple(tuple(m.data[i][j] for j in cols) for i in rows))
                   if rows and cols else Mat.zeros(F, len(rows), len(cols)))
    return tuple(out)


def trivialize(seq, B):
    """Delete in every entry the summands lying in B."""
    if B.is_zero():
        return seq
    return _strip(seq, lambda d, M: not is_formal(M) and B.contains_module(M))


def bound_cohomology(seq, low, high):
    """Delete the summands outside degrees [low, high + 1]."""
    if low > high + 1:
        raise ValueError("empty degree window")
    return _strip(seq, lambda d, M: not (low <= d <= high + 1))


# --- small object argument ----------------------------------------------------------------

def _enumerate(S, steps):
    """Generators in round-robin order (finite S) or triangular order."""
    if S.is_finite():
        elems = S.elements()
        return [elems[i % len(elems)] for i in range(steps)]
    out, k = [], 1
    it = _members(S)
    seen = []
    while len(out) < steps:
        while len(seen) < k:
            seen.append(next(it))
        out.extend(seen[:k])
        k += 1
    return out[:steps]


def _members(S):
    u, i = S.universe, 0
    plus = sorted((x for x in S.plus if u.index(x) is None), key=u.sort_key)
    yield from plus
    while True:
        x = u.at(i)
        if x in S:
            yield x
        i += 1


def small_object_sequence(ring, C, start, steps):
    if steps < 1:
        raise ValueError("steps must be positive")
    if C.is_zero():
        return constant_sequence(start, steps, ring)
    if isinstance(ring, IntegerRing):
        if C.kind != "torsion":
            raise UnsupportedStart(f"no precover data for {C}")
        if start.is_zero() or any(not isinstance(M, ZFree) for _, M in start.summands):
            raise UnsupportedStart("start must be a nonzero Z-free object")
        gens = _enumerate(C.labels, steps)
        return ObjectSequence((start,) * (steps + 1), tuple(MultiplicationWitness(p) for p in gens))
    if isinstance(ring, Kronecker) and C.kind == "regular":
        if len(start.summands) != 1 or not isinstance(start.summands[0][1], Preprojective):
            raise UnsupportedStart("start must be a single preprojective module")
        d, P = start.summands[0]
        pts = _enumerate(C.labels, steps)
        F = ring.field
        entries = [SplitObject.module(Preprojective(P.n + i), d) for i in range(steps + 1)]
        maps = []
        for i, pt in enumerate(pts):
            n = P.n + i + 1
            if F.supports_arithmetic and pt.coords is not None:
                maps.append(ModuleMapWitness(canonical_preprojective_map(F, n, pt), d))
            elif pt.degree == 1:
                maps.append(FormalConeWitness(SplitObject.module(Regular(pt), d)))
            else:
                raise UnsupportedStart(f"no canonical map P{n - 1} -> P{n} with cone at {pt}")
        return ObjectSequence(tuple(entries), tuple(maps))
    raise UnsupportedStart(f"no precover data for {C} over {ring}")


# --- homotopy colimits -----------------------------------------------------------------

@dataclass(frozen=True)
class HocolimModel:
    object: SplitObject
    inverted: LabelSet | None
    map_checks: tuple

    def __str__(self):
        return str(self.object)


def _scalar(w):
    if isinstance(w, MultiplicationWitness):
        return w.k
    if isinstance(w, ModuleMapWitness) and isinstance(w.map.ring, IntegerRing):
        f = w.map
        if all(isinstance(M, ZFree) for M in f.source + f.target) and len(f.source) == len(f.target):
            n = len(f.source)
            ks = {f.data[i][i] for i in range(n)}
            off = any(f.data[i][j] for i in range(n) for j in range(n) if i != j)
            if len(ks) == 1 and not off:
                return ks.pop()
    return None


def hocolim_model(seq, ring=None):
    cones = seq.cones()
    if all(c.is_zero() for c in cones):
        return HocolimModel(seq.entries[-1], None, tuple((n + 1, "cone 0") for n in range(len(cones))))
    E0 = seq.entries[0]
    if E0.family == "Z":
        ks = [_scalar(w) for w in seq.maps]
        if any(k in (None, 0) for k in ks) or any(E != E0 for E in seq.entries):
            raise UnsupportedFamily("only scalar multiplication chains on Z-free objects")
        if any(not isinstance(M, ZFree) for _, M in E0.summands):
            raise UnsupportedFamily("only Z-free entries")
        S = primes(sorted({p for k in ks for p in factorint(abs(k))}))
        obj = SplitObject(tuple((d, localized_free(S)) for d, _ in E0.summands))
        checks = tuple((n + 1, f"*{k} invertible over {localized_free(S)}: "
                        + str(all(p in S for p in factorint(abs(k)))))
                       for n, k in enumerate(ks))
        return HocolimModel(obj, S, checks)
    if E0.family == "kronecker":
        ds = {E.summands[0][0] for E in seq.entries if len(E.summands) == 1}
        mods = [E.summands[0][1] if len(E.summands) == 1 else None for E in seq.entries]
        if (len(ds) != 1 or any(not isinstance(M, Preprojective) for M in mods)
                or any(b.n != a.n + 1 for a, b in zip(mods, mods[1:]))):
            raise UnsupportedFamily("only chains P_k -> P_{k+1} -> ...")
        pts = []
        for c in cones:
            if len(c.summands) != 1 or not isinstance(c.summands[0][1], Regular):
                raise UnsupportedFamily(f"cone {c} is not a simple regular module")
            pts.append(c.summands[0][1].point)
        if ring is None:
            ring = next((w.map.ring for w in seq.maps if isinstance(w, ModuleMapWitness)), None)
        if ring is None:
            raise UnsupportedFamily("formal chains need the ring to be given")
        D = finite(PointUniverse(ring.field), set(pts))
        d = ds.pop()
        checks = tuple((n + 1, f"cone {c} in RegularPart({D}): {T.regular_part(ring, D).contains(c)}")
                       for n, c in enumerate(cones))
        return HocolimModel(SplitObject.module(KroneckerColimit(D), d), D, checks)
    raise UnsupportedFamily(f"no colimit model for {E0.family}")
