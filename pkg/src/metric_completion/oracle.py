"""Brute-force reference computations.

Nothing here goes through the Hom/Ext formulas, the representation code or
the linear algebra of the main modules: abelian groups are decomposed with
sympy and then handled by enumerating cyclic groups, representations are
rebuilt from scratch and ranks are taken with numpy (mod p) or sympy (over Q).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sympy import QQ, ZZ, Matrix, factorint
from sympy.matrices.normalforms import invariant_factors, smith_normal_decomp
from sympy.polys.matrices import DomainMatrix

from .errors import BoundsExceeded, UnsupportedField
from .fields import FiniteField, FieldDescriptor
from .indec import (Interval, LocalizedFree, Preinjective, Preprojective, Regular, ZFree,
                    ZTorsion)

MAX_STEPS = 10 ** 6


@dataclass(frozen=True)
class OracleConfig:
    max_total_dimension: int = 8
    max_generators_Z: int = 3
    field_for_enumeration: FieldDescriptor = field(default_factory=lambda: FiniteField(5))
    tries: int = 40
    seed: int = 0


DEFAULT = OracleConfig()


# --- abelian groups -----------------------------------------------------------------

@dataclass(frozen=True)
class ZType:
    """rank free summands (Z, or Z[S^-1] when ``inverted`` is set) plus
    primary torsion (p, k) pairs."""

    rank: int = 0
    torsion: tuple = ()
    inverted: object = None

    def matches(self, group):
        return (group.rank, tuple(group.torsion), group.inverted if group.rank else None) == \
            (self.rank, self.torsion, self.inverted if self.rank else None)

    @property
    def is_zero(self):
        return not self.rank and not self.torsion


def _cyclic_type(order):
    """Z for order 0, else the primary parts of Z/order."""
    if order == 0:
        return ZType(1)
    return ZType(0, tuple(sorted(factorint(order).items())))


def _sum(types):
    rank, tors, inv = 0, [], None
    for t in types:
        rank += t.rank
        tors += list(t.torsion)
        inv = inv or t.inverted
    return ZType(rank, tuple(sorted(tors)), inv if rank else None)


def _cyclics(M):
    """Orders of the cyclic summands of a presentation (0 for Z); localized
    free modules come back as ('loc', S)."""
    if isinstance(M, (ZFree, ZTorsion, LocalizedFree)):
        M = [M]
    if isinstance(M, Matrix):
        n = M.rows
        facs = [abs(int(d)) for d in invariant_factors(M, domain=ZZ)] if M.cols else []
        nonzero = [d for d in facs if d]
        return [0] * (n - len(nonzero)) + [d for d in nonzero if d > 1]
    out = []
    for x in M:
        if isinstance(x, ZFree):
            out.append(0)
        elif isinstance(x, ZTorsion):
            out.append(x.p ** x.k)
        elif isinstance(x, LocalizedFree):
            out.append(("loc", x.inverted))
        else:
            out.append(abs(int(x)))
    return [o for o in out if o != 1]


def _check_order(n):
    if isinstance(n, int) and n > MAX_STEPS:
        raise BoundsExceeded(f"cyclic group of order {n} is too large to enumerate")


def _hom_cyclic(m, n):
    if isinstance(m, tuple):
        raise BoundsExceeded("localized sources are not enumerable")
    _check_order(m)
    _check_order(n)
    if isinstance(n, tuple):
        # Z[S^-1] is torsion-free
        return ZType(1, (), n[1]) if m == 0 else ZType()
    if m == 0:
        return _cyclic_type(n)  # every element of the target is an image of 1
    if n == 0:
        return ZType()  # Z is torsion-free
    count = sum(1 for x in range(n) if (m * x) % n == 0)
    return _cyclic_type(count) if count > 1 else ZType()


def _ext_cyclic(m, n):
    if isinstance(m, tuple):
        raise BoundsExceeded("localized sources are not enumerable")
    _check_order(m)
    _check_order(n)
    if m == 0:
        return ZType()  # free modules are projective
    if isinstance(n, tuple):
        # Z[S^-1]/m = colim(Z/m, *s) with s the product of the inverted primes dividing m
        S = n[1]
        s = 1
        for p in factorint(m):
            if p in S:
                s *= p
        img = set(range(m))
        while True:
            nxt = {(s * x) % m for x in img}
            if nxt == img:
                break
            img = nxt
        return _cyclic_type(len(img)) if len(img) > 1 else ZType()
    if n == 0:
        return _cyclic_type(m)
    image = {(m * x) % n for x in range(n)}
    q = n // len(image)
    return _cyclic_type(q) if q > 1 else ZType()


def snf_hom_ext(M, N, config=DEFAULT):
    """(Hom(M, N), Ext(M, N)) for f.g. abelian groups.

    M and N are relation matrices (rows = generators), lists of cyclic
    orders (0 for Z) or lists of Z-modules.
    """
    cm, cn = _cyclics(M), _cyclics(N)
    if max(len(cm), len(cn)) > config.max_generators_Z:
        raise BoundsExceeded(f"more than {config.max_generators_Z} generators")
    homs = [_hom_cyclic(a, b) for a in cm for b in cn]
    exts = [_ext_cyclic(a, b) for a in cm for b in cn]
    return _sum(homs), _sum(exts)


# --- field arithmetic ----------------------------------------------------------------

class _Field:
    def __init__(self, F):
        if F.is_finite:
            if len(factorint(F.q)) != 1 or list(factorint(F.q).values())[0] != 1:
                raise UnsupportedField("the oracle enumerates over prime fields only")
            self.p = F.q
        elif F.is_uncountable:
            raise UnsupportedField("no arithmetic over a symbolic field")
        else:
            self.p = None

    def c(self, x):
        return int(x) % self.p if self.p else Fraction(x)

    def rank(self, rows, ncols):
        if not rows or not ncols:
            return 0
        if self.p:
            return _rank_mod_p(np.array(rows, dtype=np.int64) % self.p, self.p)
        return DomainMatrix([[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in r] for r in rows],
                            (len(rows), ncols), QQ).rank()


def _rank_mod_p(A, p):
    A = A.copy()
    r = 0
    rows, cols = A.shape
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i, c]), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        r += 1
        if r == rows:
            break
    return r


def _nullspace_mod_p(A, p, ncols=None):
    """Basis of {x : A x = 0} over GF(p), as a list of vectors."""
    if not len(A):
        return [np.eye(ncols, dtype=np.int64)[i] for i in range(ncols)]
    A = np.array(A, dtype=np.int64) % p
    rows, cols = A.shape
    pivots, r = [], 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i, c]), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        v = np.zeros(cols, dtype=np.int64)
        v[free] = 1
        for i, c in enumerate(pivots):
            v[c] = (-A[i, free]) % p
        basis.append(v)
    return basis


# --- representations --------------------------------------------------------------------

@dataclass(frozen=True)
class OracleRep:
    """Kronecker representation V2 -> V1 with arrow matrices A, B (d1 x d2)."""

    dims: tuple
    A: tuple
    B: tuple


def _poly_pow(K, f, k):
    out = [K.c(1)]
    for _ in range(k):
        prod = [K.c(0)] * (len(out) + len(f) - 1)
        for i, a in enumerate(out):
            for j, b in enumerate(f):
                prod[i + j] = K.c(prod[i + j] + a * b)
        out = prod
    return out


def oracle_rep(M, F):
    K = _Field(F)
    z, o = K.c(0), K.c(1)

    def mat(r, c, fn):
        return tuple(tuple(fn(i, j) for j in range(c)) for i in range(r))

    if isinstance(M, OracleRep):
        return M
    if isinstance(M, Preprojective):
        n = M.n
        return OracleRep((n, n + 1), mat(n + 1, n, lambda i, j: o if i == j else z),
                         mat(n + 1, n, lambda i, j: o if i == j + 1 else z))
    if isinstance(M, Preinjective):
        n = M.n
        return OracleRep((n + 1, n), mat(n, n + 1, lambda i, j: o if i == j else z),
                         mat(n, n + 1, lambda i, j: o if j == i + 1 else z))
    if isinstance(M, Regular):
        pt, k = M.point, M.k
        if pt.label is not None:
            raise UnsupportedField("formal points have no matrices")
        eye = mat(k, k, lambda i, j: o if i == j else z)
        if pt.poly is not None:
            f = _poly_pow(K, [K.c(c) for c in pt.poly], k)
            d = len(f) - 1
            comp = mat(d, d, lambda i, j: (K.c(-f[i]) if j == d - 1 else (o if j == i - 1 else z)))
            return OracleRep((d, d), mat(d, d, lambda i, j: o if i == j else z), comp)
        if pt.coords[0] == 0:
            return OracleRep((k, k), mat(k, k, lambda i, j: o if j == i + 1 else z), eye)
        c = K.c(pt.coords[1])
        return OracleRep((k, k), eye, mat(k, k, lambda i, j: c if i == j else (o if j == i + 1 else z)))
    raise TypeError(f"no oracle representation for {M}")


def oracle_sum(reps):
    d2 = sum(r.dims[0] for r in reps)
    d1 = sum(r.dims[1] for r in reps)

    def block(key):
        out = [[0] * d2 for _ in range(d1)]
        r0 = c0 = 0
        for r in reps:
            m = getattr(r, key)
            for i in range(r.dims[1]):
                for j in range(r.dims[0]):
                    out[r0 + i][c0 + j] = m[i][j]
            r0 += r.dims[1]
            c0 += r.dims[0]
        return tuple(tuple(row) for row in out)

    return OracleRep((d2, d1), block("A"), block("B"))


def _intertwining_system(X, Y, K):
    """Rows of the linear map (phi2, phi1) -> (phi1 A_X - A_Y phi2, phi1 B_X - B_Y phi2)."""
    d2, d1 = X.dims
    e2, e1 = Y.dims
    nvars = e2 * d2 + e1 * d1

    def v2(i, j):
        return i * d2 + j

    def v1(i, j):
        return e2 * d2 + i * d1 + j

    rows = []
    for MX, MY in ((X.A, Y.A), (X.B, Y.B)):
        for i in range(e1):
            for j in range(d2):
                row = [K.c(0)] * nvars
                for t in range(d1):
                    row[v1(i, t)] = K.c(row[v1(i, t)] + MX[t][j])
                for t in range(e2):
                    row[v2(t, j)] = K.c(row[v2(t, j)] - MY[i][t])
                rows.append(row)
    return rows, nvars


@dataclass(frozen=True)
class QuiverRep:
    """Representation of a quiver on vertices 0..len(dims)-1; arrows are
    (source, target, matrix of shape dims[target] x dims[source])."""

    dims: tuple
    arrows: tuple


def interval_rep(M, n):
    """Interval module on linear A_n with arrows v -> v+1: a 1-dim space on
    vertices i..j and identity maps between them."""
    dims = tuple(int(M.i <= v + 1 <= M.j) for v in range(n))
    arrows = tuple((v, v + 1, tuple((1,) * dims[v] for _ in range(dims[v + 1])))
                   for v in range(n - 1))
    return QuiverRep(dims, arrows)


def _quiver_system(X, Y, K):
    """Rows of (phi_v)_v -> (phi_t a_X - a_Y phi_s)_a; its cokernel is Ext^1."""
    offs, nvars = [], 0
    for dx, dy in zip(X.dims, Y.dims):
        offs.append(nvars)
        nvars += dx * dy

    def var(v, i, j):
        return offs[v] + i * X.dims[v] + j

    rows = []
    for (s, t, MX), (_, _, MY) in zip(X.arrows, Y.arrows):
        for i in range(Y.dims[t]):
            for j in range(X.dims[s]):
                row = [K.c(0)] * nvars
                for u in range(X.dims[t]):
                    row[var(t, i, u)] = K.c(row[var(t, i, u)] + MX[u][j])
                for u in range(Y.dims[s]):
                    row[var(s, u, j)] = K.c(row[var(s, u, j)] - MY[i][u])
                rows.append(row)
    return rows, nvars


def intertwiner_dims(X, Y, F=None, config=DEFAULT):
    """(dim Hom(X, Y), dim Ext(X, Y)) from the intertwining linear system."""
    F = F or config.field_for_enumeration
    if isinstance(X, Interval) and isinstance(Y, Interval):
        n = max(X.j, Y.j)
        X, Y = interval_rep(X, n), interval_rep(Y, n)
        K = _Field(F)
        rows, nvars = _quiver_system(X, Y, K)
        r = K.rank(rows, nvars)
        return nvars - r, len(rows) - r
    X, Y = oracle_rep(X, F), oracle_rep(Y, F)
    if max(sum(X.dims), sum(Y.dims)) > config.max_total_dimension:
        raise BoundsExceeded(f"dimension above {config.max_total_dimension}")
    K = _Field(F)
    rows, nvars = _intertwining_system(X, Y, K)
    r = K.rank(rows, nvars)
    return nvars - r, len(rows) - r


def _matmul(K, P, Q, k):
    """P Q with k result columns (explicit, since Q may have no rows)."""
    n, m = len(P), len(Q)
    return [[K.c(sum(P[i][t] * Q[t][j] for t in range(m))) for j in range(k)] for i in range(n)]


def _det_nonzero(K, M):
    n = len(M)
    return n == 0 or K.rank([list(r) for r in M], n) == n


def isomorphic(X, Y, F=None, config=DEFAULT):
    """Search for an invertible intertwiner among random elements of Hom(X, Y)."""
    F = F or config.field_for_enumeration
    X, Y = oracle_rep(X, F), oracle_rep(Y, F)
    if X.dims != Y.dims:
        return False
    if sum(X.dims) == 0:
        return True
    K = _Field(F)
    if not K.p:
        raise UnsupportedField("random isomorphism search runs over prime fields")
    rows, nvars = _intertwining_system(X, Y, K)
    basis = _nullspace_mod_p(rows, K.p, nvars)
    if not basis:
        return False
    rng = random.Random(config.seed)
    d2, d1 = X.dims
    for _ in range(config.tries):
        v = sum(rng.randrange(K.p) * b for b in basis) % K.p
        phi2 = [[int(v[i * d2 + j]) for j in range(d2)] for i in range(d2)]
        phi1 = [[int(v[d2 * d2 + i * d1 + j]) for j in range(d1)] for i in range(d1)]
        if _det_nonzero(K, phi2) and _det_nonzero(K, phi1):
            return True
    return False


# --- mapping cones ------------------------------------------------------------------------

def _int_kernel(A, n):
    """Columns spanning the integer kernel of the integer matrix A (n columns)."""
    if A.rows == 0:
        return Matrix.eye(n)
    S, U, V = smith_normal_decomp(A, domain=ZZ)
    r = sum(1 for i in range(min(S.shape)) if S[i, i] != 0)
    return V[:, r:]


def _subquotient(Kb, I):
    """Invariant type of span(Kb) / span(I), span(I) inside span(Kb)."""
    k = Kb.cols
    if k == 0:
        return ZType()
    if I is None or I.cols == 0:
        return ZType(k)
    coords = []
    for j in range(I.cols):
        sol, params = Kb.gauss_jordan_solve(I[:, j])
        sol = sol.subs({p: 0 for p in params})
        if any(x.q != 1 for x in sol):
            raise ValueError("image is not inside the kernel lattice")
        coords.append([int(x) for x in sol])
    C = Matrix(coords).T
    facs = [abs(int(d)) for d in invariant_factors(C, domain=ZZ)]
    nonzero = [d for d in facs if d]
    return _sum([ZType(k - len(nonzero))] + [_cyclic_type(d) for d in nonzero if d > 1])


def _order(M):
    return 0 if isinstance(M, ZFree) else M.p ** M.k


def mapping_cone_homology(f, config=DEFAULT):
    """Cohomology of the literal mapping cone.

    Over Z, both modules are replaced by their free presentations
    Z^r -R-> Z^a and Z^s -S-> Z^b; the cone of the lifted chain map has
    terms Z^r, Z^a + Z^s, Z^b in degrees -2, -1, 0.  Returns
    {degree: ZType} over the nonzero degrees.

    Over the Kronecker algebra returns {-1: kernel rep, 0: cokernel rep}.
    """
    if getattr(f.ring, "family", None) == "kronecker":
        return _kronecker_cone(f, config)
    src, tgt = [_order(M) for M in f.source], [_order(N) for N in f.target]
    if max(len(src), len(tgt)) > config.max_generators_Z:
        raise BoundsExceeded(f"more than {config.max_generators_Z} generators")
    a, b = len(src), len(tgt)
    rel_s = [j for j in range(a) if src[j]]
    rel_t = [i for i in range(b) if tgt[i]]
    f0 = Matrix(b, a, lambda i, j: int(f.data[i][j])) if a and b else Matrix.zeros(b, a)
    R = Matrix(a, len(rel_s), lambda i, c: src[i] if i == rel_s[c] else 0)
    S = Matrix(b, len(rel_t), lambda i, c: tgt[i] if i == rel_t[c] else 0)
    # f1 with S f1 = f0 R
    f1 = Matrix.zeros(len(rel_t), len(rel_s))
    for c, j in enumerate(rel_s):
        for i in range(b):
            v = src[j] * f0[i, j]
            if tgt[i]:
                if v % tgt[i]:
                    raise ValueError("matrix does not define a module map")
                f1[rel_t.index(i), c] = v // tgt[i]
            elif v:
                raise ValueError("matrix does not define a module map")
    r, s = len(rel_s), len(rel_t)
    d2 = Matrix.vstack(-R, f1) if r else Matrix.zeros(a + s, 0)
    d1 = Matrix.hstack(f0, S) if a + s else Matrix.zeros(b, 0)
    out = {}
    h2 = _subquotient(_int_kernel(d2, r), None) if r else ZType()
    h1 = _subquotient(_int_kernel(d1, a + s) if b else Matrix.eye(a + s), d2) if a + s else ZType()
    h0 = _subquotient(Matrix.eye(b), d1) if b else ZType()
    for deg, h in ((-2, h2), (-1, h1), (0, h0)):
        if not h.is_zero:
            out[deg] = h
    return out


def _kronecker_cone(f, config):
    F = f.ring.field
    K = _Field(F)
    if not K.p:
        raise UnsupportedField("the Kronecker cone oracle runs over prime fields")
    X = oracle_sum([oracle_rep(M, F) for M in f.source])
    Y = oracle_sum([oracle_rep(N, F) for N in f.target])
    if max(sum(X.dims), sum(Y.dims)) > config.max_total_dimension:
        raise BoundsExceeded(f"dimension above {config.max_total_dimension}")
    phi = [[[K.c(x) for x in row] for row in f.data[v].data] for v in range(2)]
    for MX, MY in ((X.A, Y.A), (X.B, Y.B)):
        if _matmul(K, phi[1], MX, X.dims[0]) != _matmul(K, MY, phi[0], X.dims[0]):
            raise ValueError("the vertex maps do not intertwine")
    return {-1: _kernel_rep(K, X, phi), 0: _cokernel_rep(K, Y, phi)}


def _columns(vs, n):
    return [[int(v[i]) for v in vs] for i in range(n)]


def _solve_cols(K, B, T):
    """X with B X = T, for B (given by rows) of full column rank."""
    n = len(B)
    k = len(B[0]) if n else 0
    out = []
    for t in range(len(T[0]) if T and T[0] else 0):
        aug = [list(B[i]) + [T[i][t]] for i in range(n)]
        sol = _nullspace_mod_p(aug, K.p)
        v = next(s for s in sol if s[k] % K.p)
        inv = pow(int(v[k]), -1, K.p)
        out.append([(-int(v[i]) * inv) % K.p for i in range(k)])
    return [[out[t][i] for t in range(len(out))] for i in range(k)]


def _kernel_rep(K, X, phi):
    d2, d1 = X.dims
    k2 = _nullspace_mod_p(phi[0], K.p, d2)
    k1 = _nullspace_mod_p(phi[1], K.p, d1)
    B2, B1 = _columns(k2, d2), _columns(k1, d1)
    n2, n1 = len(k2), len(k1)
    maps = []
    for M in (X.A, X.B):
        img = _matmul(K, [list(r) for r in M], B2, n2) if n2 else [[] for _ in range(d1)]
        maps.append(tuple(tuple(r) for r in _solve_cols(K, B1, img)) if n1 and n2 else
                    tuple(tuple(0 for _ in range(n2)) for _ in range(n1)))
    return OracleRep((n2, n1), maps[0], maps[1])


def _cokernel_rep(K, Y, phi):
    e2, e1 = Y.dims
    comps = []
    for v, e in ((0, e2), (1, e1)):
        cols = [[phi[v][i][j] for i in range(e)] for j in range(len(phi[v][0]) if phi[v] and phi[v][0] else 0)]
        basis = []
        for c in cols:
            if K.rank([list(x) for x in zip(*(basis + [c]))], len(basis) + 1) > len(basis):
                basis.append(c)
        im = list(basis)
        comp = []
        for i in range(e):
            u = [int(i == t) for t in range(e)]
            if K.rank([list(x) for x in zip(*(basis + [u]))], len(basis) + 1) > len(basis):
                basis.append(u)
                comp.append(u)
        comps.append((im, comp))
    (im2, c2), (im1, c1) = comps
    full1 = im1 + c1
    maps = []
    for M in (Y.A, Y.B):
        rows = []
        if c1 and c2:
            imgs = _matmul(K, [list(r) for r in M], [list(x) for x in zip(*c2)], len(c2))
            coords = _solve_cols(K, [list(x) for x in zip(*full1)], imgs)
            rows = [tuple(coords[len(im1) + i]) for i in range(len(c1))]
        else:
            rows = [tuple(0 for _ in c2) for _ in c1]
        maps.append(tuple(rows))
    return OracleRep((len(c2), len(c1)), maps[0], maps[1])
