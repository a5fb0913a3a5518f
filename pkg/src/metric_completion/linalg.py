"""Exact dense linear algebra: matrices over a field, and integer Smith form."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Mat:
    """Immutable dense matrix; ``data`` is a tuple of row tuples."""

    nrows: int
    ncols: int
    data: tuple

    @staticmethod
    def of(rows, ncols=None):
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return Mat(len(rows), ncols, rows)

    @staticmethod
    def zeros(F, r, c):
        z = F.zero if F is not None else 0
        return Mat(r, c, tuple(tuple(z for _ in range(c)) for _ in range(r)))

    @staticmethod
    def identity(F, n):
        z, o = (F.zero, F.one) if F is not None else (0, 1)
        return Mat(n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def rows(self):
        return [list(r) for r in self.data]

    def col(self, j):
        return [r[j] for r in self.data]

    def T(self):
        return Mat(self.ncols, self.nrows, tuple(tuple(self.data[i][j] for i in range(self.nrows)) for j in range(self.ncols)))

    def submatrix(self, rows, cols):
        return Mat(len(rows), len(cols), tuple(tuple(self.data[i][j] for j in cols) for i in rows))

    def is_zero(self):
        return all(x == 0 for r in self.data for x in r)


def hstack(mats, nrows=None):
    if not mats:
        return Mat(nrows or 0, 0, tuple(() for _ in range(nrows or 0)))
    n = mats[0].nrows
    return Mat(n, sum(m.ncols for m in mats), tuple(sum((m.data[i] for m in mats), ()) for i in range(n)))


def vstack(mats, ncols=None):
    if not mats:
        return Mat(0, ncols or 0, ())
    c = mats[0].ncols
    return Mat(sum(m.nrows for m in mats), c, sum((m.data for m in mats), ()))


def block_diag(F, mats):
    r = sum(m.nrows for m in mats)
    c = sum(m.ncols for m in mats)
    out = [[F.zero] * c for _ in range(r)]
    i0 = j0 = 0
    for m in mats:
        for i in range(m.nrows):
            for j in range(m.ncols):
                out[i0 + i][j0 + j] = m.data[i][j]
        i0 += m.nrows
        j0 += m.ncols
    return Mat(r, c, tuple(tuple(row) for row in out))


def matmul(F, A, B):
    if A.ncols != B.nrows:
        raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
    Bc = [B.col(j) for j in range(B.ncols)]
    out = []
    for row in A.data:
        new = []
        for col in Bc:
            acc = F.zero
            for x, y in zip(row, col):
                if x != 0 and y != 0:
                    acc = F.add(acc, F.mul(x, y))
            new.append(acc)
        out.append(tuple(new))
    return Mat(A.nrows, B.ncols, tuple(out))


def matsub(F, A, B):
    return Mat(A.nrows, A.ncols, tuple(tuple(F.sub(x, y) for x, y in zip(r, s)) for r, s in zip(A.data, B.data)))


def matscale(F, c, A):
    return Mat(A.nrows, A.ncols, tuple(tuple(F.mul(c, x) for x in r) for r in A.data))


def rref(F, A):
    """Reduced row echelon form; returns (rows as lists, pivot columns)."""
    if F.kind == "rational" and A.nrows and A.ncols:
        return _rref_qq(A)
    if F.kind == "finite" and F.is_prime_field:
        return _rref_mod_p(A, F.q)
    if F.kind == "finite" and F.q <= 1024:
        return _rref_gf_tables(A, F)
    M = A.rows()
    pivots = []
    r = 0
    for c in range(A.ncols):
        piv = next((i for i in range(r, A.nrows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, x) for x in M[r]]
        for i in range(A.nrows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == A.nrows:
            break
    return M, pivots


def _rref_mod_p(A, p):
    M = [[x % p for x in r] for r in A.data]
    pivots = []
    r = 0
    nrows = A.nrows
    for c in range(A.ncols):
        piv = next((i for i in range(r, nrows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        pr = [(inv * x) % p for x in M[r]]
        M[r] = pr
        for i in range(nrows):
            f = M[i][c]
            if i != r and f:
                M[i] = [(x - f * y) % p for x, y in zip(M[i], pr)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return M, pivots


def _rref_gf_tables(A, F):
    from .fields import _gf_tables

    T = _gf_tables(F.q)
    add, neg, exp, log, q1 = T._add, T._neg, T.exp, T.log, F.q - 1
    M = A.rows()
    pivots = []
    r = 0
    for c in range(A.ncols):
        piv = next((i for i in range(r, A.nrows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        li = (q1 - log[M[r][c]]) % q1
        pr = [exp[log[x] + li] if x else 0 for x in M[r]]
        M[r] = pr
        for i in range(A.nrows):
            f = M[i][c]
            if i != r and f:
                lf = log[neg[f]]
                M[i] = [add[x][exp[log[y] + lf]] if y else x for x, y in zip(M[i], pr)]
        pivots.append(c)
        r += 1
        if r == A.nrows:
            break
    return M, pivots


def _to_qq(A):
    from sympy import QQ
    from sympy.polys.matrices import DomainMatrix

    rows = [[QQ(int(x.numerator), int(x.denominator)) if isinstance(x, Fraction) else QQ(int(x)) for x in r]
            for r in A.data]
    return DomainMatrix(rows, A.shape, QQ)


def _rref_qq(A):
    R, pivots = _to_qq(A).rref()
    rows = [[Fraction(int(x.numerator), int(x.denominator)) for x in r] for r in R.to_list()]
    return rows, list(pivots)


def rank(F, A):
    if A.nrows == 0 or A.ncols == 0:
        return 0
    if F.kind == "rational":
        return _to_qq(A).rank()
    return len(rref(F, A)[1])


def nullspace(F, A):
    """Basis of {x : A x = 0}, as a matrix whose columns are the basis."""
    M, pivots = rref(F, A)
    free = [c for c in range(A.ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [F.zero] * A.ncols
        v[f] = F.one
        for i, p in enumerate(pivots):
            v[p] = F.neg(M[i][f])
        basis.append(v)
    return Mat(A.ncols, len(basis), tuple(tuple(b[i] for b in basis) for i in range(A.ncols)))


def column_basis(F, A):
    """Columns of A forming a basis of its column space."""
    _, pivots = rref(F, A)
    return A.submatrix(range(A.nrows), pivots)


def solve(F, A, B):
    """Some X with A X = B, or None if inconsistent."""
    aug = hstack([A, B])
    M, pivots = rref(F, aug)
    if any(p >= A.ncols for p in pivots):
        return None
    X = [[F.zero] * B.ncols for _ in range(A.ncols)]
    for i, p in enumerate(pivots):
        for j in range(B.ncols):
            X[p][j] = M[i][A.ncols + j]
    return Mat(A.ncols, B.ncols, tuple(tuple(r) for r in X))


def complement_basis(F, S, n):
    """Standard basis vectors extending the column space of S to F^n."""
    cur = S
    chosen = []
    r = rank(F, S) if S.ncols else 0
    for i in range(n):
        e = Mat(n, 1, tuple((F.one if k == i else F.zero,) for k in range(n)))
        cand = hstack([cur, e]) if cur.ncols else e
        rk = rank(F, cand)
        if rk > r:
            cur, r = cand, rk
            chosen.append(i)
    return chosen


# --- integers -------------------------------------------------------------

def smith(A):
    """Smith normal form of an integer matrix.

    Returns (U, D, V) as lists of lists with U A V = D, U and V unimodular, and
    D diagonal with nonnegative entries d_1 | d_2 | ... .
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(r) for r in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(src, dst, c):  # row dst += c * row src
        D[dst] = [x + c * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, c):
        for M in (D, V):
            for r in M:
                r[dst] += c * r[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def elementary_divisors(A, nrows=None):
    """Diagonal of the Smith form, padded with zeros to the row count."""
    m = len(A) if nrows is None else nrows
    if not A or not A[0]:
        return [0] * m
    _, D, _ = smith(A)
    return [D[i][i] if i < len(D[0]) else 0 for i in range(m)]


def int_inverse_unimodular(U):
    """Inverse of a unimodular integer matrix, by exact rational elimination."""
    n = len(U)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(U)]
    for c in range(n):
        p = next(i for i in range(c, n) if M[i][c] != 0)
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    out = [[M[i][n + j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for r in out for x in r):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in r] for r in out]
