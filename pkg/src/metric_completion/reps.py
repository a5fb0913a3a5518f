"""Explicit quiver representations and their Krull-Schmidt decomposition.

This is the main computational path behind cones of Kronecker maps; the
oracle module checks it with an independent implementation.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import NonIntertwining, UnsupportedField
from .fields import (closed_point, point, poly_add, poly_factor, poly_mul,
                     poly_pow, poly_trim)
from .indec import Interval, Preinjective, Preprojective, Regular, dim_vector
from .linalg import Mat, block_diag, hstack, matmul, nullspace, rank, rref, solve

KRONECKER_ARROWS = ((0, 1), (0, 1))  # vertex index 0 is "2", index 1 is "1"


def dynkin_arrows(n):
    return tuple((v, v + 1) for v in range(n - 1))


@dataclass(frozen=True)
class Rep:
    field: object
    arrows: tuple
    dims: tuple
    maps: tuple  # one Mat per arrow, shape (dims[target], dims[source])

    def __post_init__(self):
        for (s, t), m in zip(self.arrows, self.maps):
            if m.shape != (self.dims[t], self.dims[s]):
                raise ValueError(f"map shape {m.shape} does not match dims {self.dims}")

    @property
    def total_dim(self):
        return sum(self.dims)


@dataclass(frozen=True)
class RepMap:
    source: Rep
    target: Rep
    comps: tuple  # one Mat per vertex, shape (target dim, source dim)

    def check(self):
        F = self.source.field
        for (s, t), a, b in zip(self.source.arrows, self.source.maps, self.target.maps):
            lhs = matmul(F, self.comps[t], a)
            rhs = matmul(F, b, self.comps[s])
            if lhs != rhs:
                raise NonIntertwining("matrices do not intertwine the representation maps")
        return self


# --- catalog representations ---------------------------------------------------

def _jordan(F, k, c):
    return Mat(k, k, tuple(tuple(c if i == j else (F.one if j == i + 1 else F.zero) for j in range(k)) for i in range(k)))


def _companion(F, poly):
    d = len(poly) - 1
    rows = []
    for i in range(d):
        row = [F.zero] * d
        if i > 0:
            row[i - 1] = F.one
        row[d - 1] = F.neg(poly[i])
        rows.append(tuple(row))
    return Mat(d, d, tuple(rows))


@lru_cache(maxsize=None)
def explicit_rep(X, F, n=None):
    """Concrete matrices for a catalog indecomposable.

    P_n: polynomials of degree n-1 -> degree n with A = x, B = y.
    I_n: the dual pencil, K^(n+1) -> K^n with A = [I 0], B = [0 I].
    R((1:c), k): A = I, B = Jordan block at c;  R((0:1), k): A = nilpotent, B = I.
    R(pi, k) for a closed point pi of degree >= 2: A = I, B = companion(pi^k).
    """
    if isinstance(X, Interval):
        n = n or X.j
        dims = tuple(int(X.i <= v + 1 <= X.j) for v in range(n))
        maps = tuple(Mat.identity(F, 1) if dims[s] and dims[t] else Mat.zeros(F, dims[t], dims[s])
                     for s, t in dynkin_arrows(n))
        return Rep(F, dynkin_arrows(n), dims, maps)
    if not F.supports_arithmetic:
        raise UnsupportedField("explicit matrices need a field with arithmetic")
    if isinstance(X, Preprojective):
        m = X.n
        A = Mat(m + 1, m, tuple(tuple(F.one if i == j else F.zero for j in range(m)) for i in range(m + 1)))
        B = Mat(m + 1, m, tuple(tuple(F.one if i == j + 1 else F.zero for j in range(m)) for i in range(m + 1)))
        return Rep(F, KRONECKER_ARROWS, (m, m + 1), (A, B))
    if isinstance(X, Preinjective):
        m = X.n
        A = Mat(m, m + 1, tuple(tuple(F.one if j == i else F.zero for j in range(m + 1)) for i in range(m)))
        B = Mat(m, m + 1, tuple(tuple(F.one if j == i + 1 else F.zero for j in range(m + 1)) for i in range(m)))
        return Rep(F, KRONECKER_ARROWS, (m + 1, m), (A, B))
    if isinstance(X, Regular):
        k, pt = X.k, X.point
        if pt.label is not None:
            raise UnsupportedField("formal points have no matrices")
        if pt.poly is not None:
            B = _companion(F, poly_pow(F, pt.poly, k))
            d = B.nrows
            return Rep(F, KRONECKER_ARROWS, (d, d), (Mat.identity(F, d), B))
        if pt.is_infinity:
            return Rep(F, KRONECKER_ARROWS, (k, k), (_jordan(F, k, F.zero), Mat.identity(F, k)))
        return Rep(F, KRONECKER_ARROWS, (k, k), (Mat.identity(F, k), _jordan(F, k, F.coerce(pt.coords[1]))))
    raise TypeError(f"no explicit representation for {X}")


def direct_sum(reps, F, arrows, nverts):
    if not reps:
        return Rep(F, arrows, (0,) * nverts, tuple(Mat.zeros(F, 0, 0) for _ in arrows))
    dims = tuple(sum(r.dims[v] for r in reps) for v in range(nverts))
    maps = tuple(block_diag(F, [r.maps[a] for r in reps]) for a in range(len(arrows)))
    return Rep(F, arrows, dims, maps)


# --- Hom spaces -------------------------------------------------------------------

def _offsets(X, Y):
    offsets, n = [], 0
    for v in range(len(X.dims)):
        offsets.append(n)
        n += X.dims[v] * Y.dims[v]
    return offsets, n


def _hom_system(X, Y, n):
    F = X.field
    offsets, n = _offsets(X, Y)
    rows = []
    for (s, t), a, b in zip(X.arrows, X.maps, Y.maps):
        # (f_t a - b f_s)[i, j] = 0
        for i in range(Y.dims[t]):
            for j in range(X.dims[s]):
                row = [F.zero] * n
                for l in range(X.dims[t]):
                    if a[l, j] != 0:
                        idx = offsets[t] + i * X.dims[t] + l
                        row[idx] = F.add(row[idx], a[l, j])
                for l in range(Y.dims[s]):
                    if b[i, l] != 0:
                        idx = offsets[s] + l * X.dims[s] + j
                        row[idx] = F.sub(row[idx], b[i, l])
                rows.append(row)
    return Mat.of(rows, n) if rows else Mat.zeros(F, 0, n)


def hom_basis(X, Y):
    """Basis of Hom(X, Y) as a list of tuples of per-vertex matrices."""
    F = X.field
    offsets, n = _offsets(X, Y)
    if n == 0:
        return []
    S = _hom_system(X, Y, n)
    N = nullspace(F, S) if S.nrows else Mat.identity(F, n)
    out = []
    for c in range(N.ncols):
        vec = N.col(c)
        comps = []
        for v in range(len(X.dims)):
            r, cdim = Y.dims[v], X.dims[v]
            comps.append(Mat(r, cdim, tuple(tuple(vec[offsets[v] + i * cdim + j] for j in range(cdim)) for i in range(r))))
        out.append(tuple(comps))
    return out


def hom_dimension(X, Y):
    n = sum(X.dims[v] * Y.dims[v] for v in range(len(X.dims)))
    if n == 0:
        return 0
    return n - rank(X.field, _hom_system(X, Y, n))


# --- subrepresentations and quotients ----------------------------------------------

def _coords(F, basis, vectors):
    """Coordinates of the columns of ``vectors`` in the column basis ``basis``."""
    X = solve(F, basis, vectors)
    if X is None:
        raise ValueError("vectors are not in the span")
    return X


def subrep(X, bases):
    """Subrepresentation spanned at each vertex by the columns of ``bases``."""
    F = X.field
    dims = tuple(b.ncols for b in bases)
    maps = []
    for (s, t), a in zip(X.arrows, X.maps):
        if dims[s] == 0 or dims[t] == 0:
            maps.append(Mat.zeros(F, dims[t], dims[s]))
            continue
        maps.append(_coords(F, bases[t], matmul(F, a, bases[s])))
    return Rep(F, X.arrows, dims, tuple(maps))


def quotient_rep(X, bases):
    """X modulo the subrepresentation spanned by ``bases`` (columns)."""
    F = X.field
    comps, proj = [], []
    for v, b in enumerate(X.dims):
        S = bases[v]
        _, piv = rref(F, hstack([S, Mat.identity(F, b)]) if S.ncols else Mat.identity(F, b))
        keep = [p - S.ncols for p in piv if p >= S.ncols]
        comps.append(keep)
        # projection: express e_j in basis [S | e_keep], drop the S part
        full = hstack([S, Mat.identity(F, b).submatrix(range(b), keep)]) if S.ncols else Mat.identity(F, b).submatrix(range(b), keep)
        if b == 0:
            proj.append(Mat.zeros(F, 0, 0))
            continue
        coords = _coords(F, full, Mat.identity(F, b))
        proj.append(coords.submatrix(range(S.ncols, S.ncols + len(keep)), range(b)))
    dims = tuple(len(k) for k in comps)
    maps = []
    for (s, t), a in zip(X.arrows, X.maps):
        lift = Mat.identity(F, X.dims[s]).submatrix(range(X.dims[s]), comps[s])
        maps.append(matmul(F, proj[t], matmul(F, a, lift)) if dims[s] and dims[t] else Mat.zeros(F, dims[t], dims[s]))
    return Rep(F, X.arrows, dims, tuple(maps)), tuple(proj)


def kernel_rep(f):
    F = f.source.field
    return subrep(f.source, tuple(nullspace(F, c) for c in f.comps))


def image_bases(f):
    F = f.source.field
    out = []
    for c in f.comps:
        if c.ncols == 0 or c.nrows == 0:
            out.append(Mat.zeros(F, c.nrows, 0))
            continue
        _, piv = rref(F, c)
        out.append(c.submatrix(range(c.nrows), piv))
    return tuple(out)


def cokernel_rep(f):
    return quotient_rep(f.target, image_bases(f))[0]


def _span(F, mats, n):
    mats = [m for m in mats if m.ncols]
    if not mats:
        return Mat.zeros(F, n, 0)
    M = hstack(mats)
    _, piv = rref(F, M)
    return M.submatrix(range(n), piv)


def _intersect(F, U, W, n):
    """Column basis of span(U) ∩ span(W)."""
    if U.ncols == 0 or W.ncols == 0:
        return Mat.zeros(F, n, 0)
    N = nullspace(F, hstack([U, W]))
    if N.ncols == 0:
        return Mat.zeros(F, n, 0)
    return _span(F, [matmul(F, U, N.submatrix(range(U.ncols), range(N.ncols)))], n)


# --- Kronecker decomposition -----------------------------------------------------

def _det_poly(F, M):
    """Determinant of a square matrix of polynomials (Laplace with memo)."""
    n = len(M)
    memo = {}

    def rec(row, cols):
        if row == n:
            return (F.one,)
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = ()
        for j in range(n):
            if cols >> j & 1:
                continue
            entry = M[row][j]
            if entry:
                term = poly_mul(F, entry, rec(row + 1, cols | 1 << j))
                # sign from the number of still-unused columns before j
                before = sum(1 for c in range(j) if not cols >> c & 1)
                if before % 2:
                    term = tuple(F.neg(c) for c in term)
                acc = poly_add(F, acc, term)
        memo[key] = acc
        return acc

    return rec(0, 0)


def regular_part(M):
    """The regular summand of a Kronecker representation, up to isomorphism.

    t(M) = intersection of kernels of all maps to preprojectives (the torsion
    part for the pair (add(R + I), add P)); its preinjective part is the sum of
    images of preinjectives; the quotient is the regular part.
    """
    F = M.field
    kers = [Mat.identity(F, M.dims[v]) for v in range(2)]
    for n in range(M.dims[1] + 1):
        P = explicit_rep(Preprojective(n), F)
        for comps in hom_basis(M, P):
            for v in range(2):
                kers[v] = _intersect(F, kers[v], nullspace(F, comps[v]), M.dims[v]) if kers[v].ncols else kers[v]
    T = subrep(M, tuple(kers))
    imgs = [[], []]
    for n in range(T.dims[0] + 1):
        I = explicit_rep(Preinjective(n), F)
        for comps in hom_basis(I, T):
            for v in range(2):
                imgs[v].append(comps[v])
    sub = tuple(_span(F, imgs[v], T.dims[v]) for v in range(2))
    return quotient_rep(T, sub)[0]


def regular_points(R):
    """Closed points (with multiplicity bound) supporting a regular rep."""
    F = R.field
    r = R.dims[0]
    A, B = R.maps
    # det(t A - B) as a polynomial in t
    Mpoly = [[poly_trim(F, (F.neg(B[i, j]), A[i, j])) for j in range(r)] for i in range(r)]
    f = _det_poly(F, Mpoly)
    out = []
    if len(f) - 1 < r:
        out.append((point(F, 0, 1), r - (len(f) - 1)))
    if len(f) > 1:
        for g, e in poly_factor(F, f):
            out.append((closed_point(F, g), e))
    return out


def decompose_kronecker(M):
    """Multiset of catalog indecomposables isomorphic to M, as a sorted list."""
    F = M.field
    d2, d1 = M.dims
    out = []

    @lru_cache(maxsize=None)
    def h(X):
        return hom_dimension(M, explicit_rep(X, F))

    for n in range(d1):
        hp = lambda m: h(Preprojective(m)) if m >= 0 else 0
        mult = hp(n) - 2 * hp(n - 1) + hp(n - 2)
        out += [Preprojective(n)] * mult
    for n in range(d2):
        hi = lambda m: h(Preinjective(m))
        mult = hi(n) - 2 * hi(n + 1) + hi(n + 2)
        out += [Preinjective(n)] * mult
    used = [0, 0]
    for X in out:
        d = dim_vector(X)
        used[0] += d[0]
        used[1] += d[1]
    if used[0] < d2:
        R = regular_part(M)
        for pt, e in regular_points(R):
            hr = lambda j: hom_dimension(R, explicit_rep(Regular(pt, j), F)) if j > 0 else 0
            for j in range(1, e + 1):
                mult = (2 * hr(j) - hr(j + 1) - hr(j - 1)) // pt.degree
                out += [Regular(pt, j)] * mult
    return sorted(out, key=lambda X: X.sort_key())
