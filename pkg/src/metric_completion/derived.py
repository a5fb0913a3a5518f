"""Objects of the bounded derived category of a hereditary ring, stored split.

A ``SplitObject`` is a finite multiset of pairs (i, M) standing for the
summand Σ^{-i} M, i.e. the module M sitting in cohomological degree i.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from sympy import factorint

from .errors import MixedRings, NonIntertwining, UnsupportedRing, WrongRing
from .indec import (ZERO_GROUP, IntegerRing, Kronecker, LocalizedFree,
                    Preprojective, ZFree, ZTorsion, dim_vector, hom_invariants,
                    is_formal, localized_free)
from .labels import PRIMES, all_primes, empty, primes
from .linalg import Mat, elementary_divisors, int_inverse_unimodular, smith
from .reps import (KRONECKER_ARROWS, RepMap, cokernel_rep, decompose_kronecker,
                   direct_sum, explicit_rep, kernel_rep)


def _key(pair):
    return (pair[0], pair[1].family, pair[1].sort_key())


@dataclass(frozen=True)
class SplitObject:
    summands: tuple = ()

    def __post_init__(self):
        items = sorted(((int(d), M) for d, M in self.summands), key=_key)
        fams = {M.family for _, M in items}
        if len(fams) > 1:
            raise MixedRings("summands over different rings")
        object.__setattr__(self, "summands", tuple(items))

    @staticmethod
    def of(*pairs):
        return SplitObject(tuple(pairs))

    @staticmethod
    def module(M, degree=0):
        return SplitObject(((degree, M),))

    @property
    def family(self):
        return self.summands[0][1].family if self.summands else None

    def is_zero(self):
        return not self.summands

    def __bool__(self):
        return bool(self.summands)

    def __add__(self, other):
        if self.family and other.family and self.family != other.family:
            raise MixedRings("direct sum over different rings")
        return SplitObject(self.summands + other.summands)

    def degrees(self):
        return sorted({d for d, _ in self.summands})

    def bounds(self):
        """(lowest, highest) nonzero degree, or None for the zero object."""
        ds = self.degrees()
        return (ds[0], ds[-1]) if ds else None

    def multiset(self):
        return Counter(self.summands)

    def __str__(self):
        if not self.summands:
            return "0"
        parts = []
        for (d, M), m in sorted(self.multiset().items(), key=lambda kv: _key(kv[0])):
            s = str(M) if m == 1 else f"{M}^{m}"
            parts.append(s if d == 0 else f"{s}@{d}")
        return " + ".join(parts)

    __repr__ = __str__


ZERO = SplitObject()


def shift(X, k):
    """Σ^k X: a summand in degree i moves to degree i - k."""
    return SplitObject(tuple((d - k, M) for d, M in X.summands))


def cohomology(X):
    """Degree -> sorted list of indecomposable summands of H^i(X)."""
    out = {}
    for d, M in X.summands:
        out.setdefault(d, []).append(M)
    return out


def _zero_like(family):
    return ZERO_GROUP if family == "Z" else 0


def graded_hom(X, Y):
    """{j: Hom(X, Σ^j Y)} over the nonzero j.

    For summands (a, M) of X and (b, N) of Y, Hom(Σ^{-a}M, Σ^{j-b}N) is
    Hom(M, N) when j = b - a and Ext^1(M, N) when j = b - a + 1.
    Values are abelian groups over Z and dimensions over a field.
    """
    if X.family and Y.family and X.family != Y.family:
        raise MixedRings("graded Hom between different rings")
    out = {}
    for a, M in X.summands:
        for b, N in Y.summands:
            h, e = hom_invariants(M, N)
            for j, v in ((b - a, h), (b - a + 1, e)):
                if v:
                    out[j] = out[j] + v if j in out else v
    return {j: v for j, v in sorted(out.items())}


def hom_at(X, Y, j):
    return graded_hom(X, Y).get(j, _zero_like(X.family or Y.family))


@dataclass(frozen=True)
class SpecSubset:
    """Primes in ``primes`` plus, if ``generic``, the generic point (0)."""

    primes: object
    generic: bool = False

    def is_all(self):
        return self.generic and self.primes.is_all()

    def is_empty(self):
        return not self.generic and self.primes.is_empty()

    def __str__(self):
        if self.is_all():
            return "Spec(Z)"
        s = str(self.primes)
        return f"{s} + (0)" if self.generic else s


def support_Z(X):
    if X.family not in (None, "Z"):
        raise WrongRing("support is defined over Z")
    ps, generic = empty(PRIMES), False
    for _, M in X.summands:
        if isinstance(M, ZFree):
            ps, generic = all_primes(), True
        elif isinstance(M, ZTorsion):
            ps = ps | primes([M.p])
        elif isinstance(M, LocalizedFree):
            ps, generic = ps | M.inverted.complement(), True
    return SpecSubset(ps, generic)


def k0_class(X):
    """Class in the Grothendieck group: an integer over Z, a dimension vector
    over a quiver; formal colimits have no class and give None."""
    fam = X.family
    if fam is None:
        return 0
    acc = None
    for d, M in X.summands:
        if is_formal(M):
            return None
        sign = -1 if d % 2 else 1
        if fam == "Z":
            v = (int(isinstance(M, ZFree)),)
        else:
            v = dim_vector(M)
        v = tuple(sign * x for x in v)
        acc = v if acc is None else tuple(a + b for a, b in zip(acc, v))
    return acc[0] if fam == "Z" else acc


# --- module maps ------------------------------------------------------------------

def _order(M):
    return 0 if isinstance(M, ZFree) else M.p ** M.k


@dataclass(frozen=True)
class ModuleMap:
    """A map between degree-0 direct sums of indecomposables.

    Over Z, ``data`` is an integer matrix (rows = target generators, columns =
    source generators) in the canonical presentation where each summand has
    one generator; entries are reduced modulo the target generator's order.
    Over the Kronecker algebra, ``data`` is a pair of field matrices, one per
    vertex in the order (vertex 2, vertex 1), with respect to the explicit
    representations of the summands.
    """

    ring: object
    source: tuple
    target: tuple
    data: tuple

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))
        if any(is_formal(M) for M in self.source + self.target):
            raise NonIntertwining("module maps carry matrices between finitely generated modules only")
        if isinstance(self.ring, IntegerRing):
            rows = tuple(tuple(int(x) for x in r) for r in self.data)
            if len(rows) != len(self.target) or any(len(r) != len(self.source) for r in rows):
                raise NonIntertwining("matrix shape does not match the summands")
            fixed = []
            for i, N in enumerate(self.target):
                t = _order(N)
                row = []
                for j, M in enumerate(self.source):
                    x = rows[i][j] % t if t else rows[i][j]
                    o = _order(M)
                    if (o * x) % t if t else o * x:
                        raise NonIntertwining(f"entry ({i},{j}) does not respect the annihilator of {M}")
                    row.append(x)
                fixed.append(tuple(row))
            object.__setattr__(self, "data", tuple(fixed))
        elif isinstance(self.ring, Kronecker):
            comps = tuple(m if isinstance(m, Mat) else Mat.of(m, None) for m in self.data)
            object.__setattr__(self, "data", comps)
            self.as_rep_map().check()
        else:
            raise UnsupportedRing(f"module maps over {self.ring} are not modeled")

    def as_rep_map(self):
        F = self.ring.field
        src = direct_sum([explicit_rep(M, F) for M in self.source], F, KRONECKER_ARROWS, 2)
        tgt = direct_sum([explicit_rep(N, F) for N in self.target], F, KRONECKER_ARROWS, 2)
        comps = []
        for v in range(2):
            m = self.data[v]
            if m.shape != (tgt.dims[v], src.dims[v]):
                if tgt.dims[v] * src.dims[v] == 0 and m.nrows * m.ncols == 0:
                    m = Mat.zeros(F, tgt.dims[v], src.dims[v])
                else:
                    raise NonIntertwining(f"vertex component shape {m.shape} does not match {tgt.dims[v]}x{src.dims[v]}")
            comps.append(m)
        return RepMap(src, tgt, tuple(comps))

    @property
    def source_object(self):
        return SplitObject(tuple((0, M) for M in self.source))

    @property
    def target_object(self):
        return SplitObject(tuple((0, N) for N in self.target))


def integer_map(source, target, matrix):
    return ModuleMap(IntegerRing(), source, target, matrix)


def identity_map(ring, modules):
    modules = tuple(modules)
    if isinstance(ring, IntegerRing):
        n = len(modules)
        return ModuleMap(ring, modules, modules, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))
    F = ring.field
    rep = direct_sum([explicit_rep(M, F) for M in modules], F, KRONECKER_ARROWS, 2)
    return ModuleMap(ring, modules, modules, tuple(Mat.identity(F, d) for d in rep.dims))


def multiplication_map(k, rank=1):
    """Multiplication by k on Z^rank."""
    return integer_map((ZFree(),) * rank, (ZFree(),) * rank,
                       tuple(tuple(k if i == j else 0 for j in range(rank)) for i in range(rank)))


def canonical_preprojective_map(F, n, pt):
    """P_{n-1} -> P_n given by multiplication with the linear form vanishing
    at pt; its cokernel is the simple regular module at pt."""
    if n < 1:
        raise ValueError("need n >= 1")
    if pt.is_infinity:
        a, b = F.zero, F.one
    else:
        a, b = F.one, F.coerce(pt.coords[1])

    def block(rows, cols):
        return Mat(rows, cols, tuple(tuple(b if i == j else (F.neg(a) if i == j + 1 else F.zero)
                                           for j in range(cols)) for i in range(rows)))

    return ModuleMap(Kronecker(F), (Preprojective(n - 1),), (Preprojective(n),),
                     (block(n, n - 1), block(n + 1, n)))


# --- cones ---------------------------------------------------------------------------

def _cyclic_summands(invariants):
    out = []
    for d in invariants:
        if d == 0:
            out.append(ZFree())
        elif d > 1:
            out += [ZTorsion(p, k) for p, k in factorint(d).items()]
    return out


def _integer_nullspace(A, ncols):
    """Basis (as columns) of the integer kernel of A."""
    if not A:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    _, D, V = smith(A)
    r = sum(1 for i in range(min(len(D), ncols)) if D[i][i])
    return [[V[i][j] for j in range(r, ncols)] for i in range(ncols)]


def _z_kernel_cokernel(f):
    src, tgt = f.source, f.target
    n, m = len(src), len(tgt)
    t = [_order(N) for N in tgt]
    o = [_order(M) for M in src]
    # coker = Z^m / (image of f + relations of the target)
    rel = [list(f.data[i]) + [t[i] if k == i else 0 for k in range(m)] for i in range(m)]
    coker = _cyclic_summands(elementary_divisors(rel, m)) if m else []
    if n == 0:
        return [], coker
    # L = {x in Z^n : f x in span of target relations}
    big = [list(f.data[i]) + [t[i] if k == i else 0 for k in range(m)] for i in range(m)]
    N = _integer_nullspace(big, n + m) if m else [[int(i == j) for j in range(n)] for i in range(n)]
    L = [row[:] for row in N[:n]]
    # column basis of L: Smith of the generating set gives a basis
    gens = [[L[i][j] for i in range(n)] for j in range(len(L[0]) if L else 0)]
    basis = _lattice_basis(gens, n)
    # relations of the source expressed in that basis
    rels = [[o[j] if i == j else 0 for i in range(n)] for j in range(n) if o[j]]
    coords = [_coords_in(basis, r) for r in rels]
    k = len(basis)
    if k == 0:
        return [], coker
    Rm = [[c[i] for c in coords] for i in range(k)] if coords else [[0] for _ in range(k)]
    ker = _cyclic_summands(elementary_divisors(Rm, k) if coords else [0] * k)
    return ker, coker


def _lattice_basis(gens, n):
    """Basis of the Z-span of integer vectors ``gens`` (length n each)."""
    if not gens:
        return []
    _, D, V = smith([list(g) for g in gens])
    # rows of V^{-1} scaled by D span the same lattice as the rows of gens
    Vi = int_inverse_unimodular(V)
    return [[D[i][i] * Vi[i][j] for j in range(n)] for i in range(min(len(D), n)) if D[i][i]]


def _coords_in(basis, v):
    k = len(basis)
    n = len(v)
    # solve sum c_i basis_i = v over Q; the solution is integral for lattice members
    M = [[Fraction(basis[i][r]) for i in range(k)] + [Fraction(v[r])] for r in range(n)]
    piv_cols, row = [], 0
    for c in range(k):
        p = next((i for i in range(row, n) if M[i][c] != 0), None)
        if p is None:
            continue
        M[row], M[p] = M[p], M[row]
        inv = 1 / M[row][c]
        M[row] = [x * inv for x in M[row]]
        for i in range(n):
            if i != row and M[i][c] != 0:
                fac = M[i][c]
                M[i] = [x - fac * y for x, y in zip(M[i], M[row])]
        piv_cols.append(c)
        row += 1
    out = [0] * k
    for i, c in enumerate(piv_cols):
        x = M[i][k]
        if x.denominator != 1:
            raise ValueError("vector is not in the lattice")
        out[c] = int(x)
    return out


def kernel_cokernel(f):
    """(kernel summands, cokernel summands) of a module map."""
    if isinstance(f.ring, IntegerRing):
        return _z_kernel_cokernel(f)
    g = f.as_rep_map()
    return decompose_kronecker(kernel_rep(g)), decompose_kronecker(cokernel_rep(g))


def cone_of_module_map(f):
    """cone(f) = Σ ker f ⊕ coker f: kernel in degree -1, cokernel in degree 0."""
    ker, coker = kernel_cokernel(f)
    return SplitObject(tuple((-1, M) for M in ker) + tuple((0, N) for N in coker))


def localized_free_object(S, degree=0):
    return SplitObject.module(localized_free(S), degree)

