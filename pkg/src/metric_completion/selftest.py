"""Oracle-equivalence suites, shared by the CLI ``selftest`` command."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from sympy import Matrix, factorint

from . import oracle as O
from .derived import ModuleMap, cone_of_module_map, integer_map
from .errors import ProjectiveArgument
from .fields import FiniteField, Rational, closed_point, point
from .indec import (DynkinAn, Kronecker, Regular, ZFree, ZTorsion, dim_vector, dynkin_catalog, euler_form,
                    hom_invariants, kronecker_catalog, prime_powers_upto, tau, z_catalog)
from .labels import primes
from .linalg import Mat, elementary_divisors
from .reps import KRONECKER_ARROWS, direct_sum, explicit_rep, hom_basis

BOUNDS = {
    "small": {"prime_power": 9, "kronecker_dim": 5, "random": 40, "cone_n": 3, "dynkin_n": 3},
    "full": {"prime_power": 27, "kronecker_dim": 8, "random": 200, "cone_n": 5, "dynkin_n": 6},
}


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self):
        return not self.failures

    def to_dict(self):
        return {"suite": self.name, "cases": self.cases, "failures": len(self.failures),
                "examples": [str(f) for f in self.failures[:5]], "seconds": round(self.seconds, 3)}


def kronecker_points(F):
    """A fixed point set per field: all rational points plus a degree-2
    point over GF(5); a handful of rational points and i over Q."""
    if F.is_finite:
        return [point(F, 0, 1)] + [point(F, 1, c) for c in range(F.q)], [closed_point(F, [3, 0, 1])]
    return [point(F, 0, 1), point(F, 1, 0), point(F, 1, 1), point(F, 1, -1)], [closed_point(F, [1, 0, 1])]


def kronecker_test_catalog(F, max_dim):
    pts, closed = kronecker_points(F)
    return kronecker_catalog(pts, max_dim, closed)


def _group_of(factors):
    from .indec import AbelianGroup
    return AbelianGroup.from_invariants(factors)


def _sum_groups(gs):
    out = None
    for g in gs:
        out = g if out is None else out + g
    return out


def z_presentation_pairs(rng, count, max_pp):
    """Random relation matrices with <= 3 generators whose invariants are
    prime powers <= max_pp (or 0), scrambled by unimodular changes of basis."""
    pps = prime_powers_upto(max_pp)
    out = []
    for _ in range(count):
        pair = []
        for _ in range(2):
            n = rng.randint(1, 3)
            diag = [rng.choice([0] + pps) for _ in range(n)]
            D = [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)]
            U, V = _unimodular(rng, n), _unimodular(rng, n)
            pair.append(_mul(_mul(U, D), V))
        out.append(tuple(pair))
    return out


def _unimodular(rng, n):
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i != j:
            k = rng.randint(-2, 2)
            M = [[M[r][c] + (k * M[j][c] if r == i else 0) for c in range(n)] for r in range(n)]
    return M


def _mul(A, B):
    return [[sum(A[i][t] * B[t][j] for t in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _main_modules(R):
    n = len(R)
    mods = []
    for d in elementary_divisors(R, n):
        if d == 0:
            mods.append(ZFree())
        elif d > 1:
            mods += [ZTorsion(p, k) for p, k in factorint(d).items()]
    return mods


def suite_z_hom_ext(bounds):
    res = SuiteResult("Z Hom/Ext vs SNF oracle")
    cat = z_catalog(prime_powers_upto(bounds["prime_power"]))
    for M in cat:
        for N in cat:
            res.cases += 1
            h, e = hom_invariants(M, N)
            oh, oe = O.snf_hom_ext([M], [N])
            if not (oh.matches(h) and oe.matches(e)):
                res.failures.append((M, N, h, e, oh, oe))
    rng = random.Random(1)
    for R, S in z_presentation_pairs(rng, bounds["random"], bounds["prime_power"]):
        res.cases += 1
        A, B = _main_modules(R), _main_modules(S)
        hs = [hom_invariants(a, b) for a in A for b in B]
        h = _sum_groups([x.hom for x in hs]) or _group_of([])
        e = _sum_groups([x.ext for x in hs]) or _group_of([])
        oh, oe = O.snf_hom_ext(Matrix(R), Matrix(S))
        if not (oh.matches(h) and oe.matches(e)):
            res.failures.append((R, S, h, e, oh, oe))
    return res


def suite_kronecker_hom_ext(bounds):
    res = SuiteResult("Kronecker Hom/Ext vs intertwiner oracle")
    cfg = O.OracleConfig(max_total_dimension=bounds["kronecker_dim"])
    for F in (FiniteField(5), Rational()):
        K = Kronecker(F)
        cat = kronecker_test_catalog(F, bounds["kronecker_dim"])
        for X in cat:
            for Y in cat:
                res.cases += 1
                h, e = hom_invariants(X, Y, K)
                if (h, e) != O.intertwiner_dims(X, Y, F, cfg):
                    res.failures.append((F, X, Y, (h, e)))
    return res


def suite_euler_serre(bounds):
    res = SuiteResult("Euler form and Auslander-Reiten formula")
    for F in (FiniteField(5), Rational()):
        K = Kronecker(F)
        cat = kronecker_test_catalog(F, bounds["kronecker_dim"])
        for X in cat:
            try:
                tX = tau(X, K)
            except ProjectiveArgument:
                tX = None
            for Y in cat:
                res.cases += 1
                h, e = hom_invariants(X, Y, K)
                if h - e != euler_form(dim_vector(X), dim_vector(Y), K):
                    res.failures.append(("euler", X, Y))
                serre = 0 if tX is None else hom_invariants(Y, tX, K).hom
                if e != serre:
                    res.failures.append(("serre", X, Y))
    return res


def _oracle_cone_types(f):
    return {d: (t.rank, t.torsion) for d, t in O.mapping_cone_homology(f).items()}


def _main_cone_types(f):
    from .indec import AbelianGroup
    out = {}
    for d, M in cone_of_module_map(f).summands:
        g = AbelianGroup(1) if isinstance(M, ZFree) else AbelianGroup.cyclic(M.p, M.k)
        out[d] = out[d] + g if d in out else g
    return {d: (g.rank, g.torsion) for d, g in out.items()}


def random_integer_maps(rng, count, max_pp=9):
    pps = [0] + prime_powers_upto(max_pp)
    out = []
    while len(out) < count:
        src = [rng.choice(pps) for _ in range(rng.randint(1, 3))]
        tgt = [rng.choice(pps) for _ in range(rng.randint(1, 3))]
        mods = [[ZFree() if o == 0 else ZTorsion(*next(iter(factorint(o).items()))) for o in s]
                for s in (src, tgt)]
        data = []
        for t in tgt:
            row = []
            for s in src:
                # entries must respect the annihilators: s * x = 0 in Z/t
                choices = [x for x in range(-4, 5) if (t == 0 and s == 0) or (t != 0 and (s * x) % t == 0)]
                row.append(rng.choice(choices or [0]))
            data.append(tuple(row))
        out.append(integer_map(mods[0], mods[1], tuple(data)))
    return out


def suite_z_cones(bounds):
    res = SuiteResult("Z cones vs literal mapping cone")
    rng = random.Random(2)
    for f in random_integer_maps(rng, bounds["random"]):
        res.cases += 1
        if _main_cone_types(f) != _oracle_cone_types(f):
            res.failures.append(f)
    return res


def random_kronecker_maps(rng, F, count, max_dim):
    cat = [X for X in kronecker_test_catalog(F, max_dim) if sum(dim_vector(X)) <= max_dim // 2 + 1]
    K = Kronecker(F)
    out = []
    while len(out) < count:
        src = rng.sample(cat, rng.randint(1, 2))
        tgt = rng.sample(cat, rng.randint(1, 2))
        rs = direct_sum([explicit_rep(M, F) for M in src], F, KRONECKER_ARROWS, 2)
        rt = direct_sum([explicit_rep(N, F) for N in tgt], F, KRONECKER_ARROWS, 2)
        if sum(rs.dims) + sum(rt.dims) > 2 * max_dim:
            continue
        basis = hom_basis(rs, rt)
        coeffs = [F.coerce(rng.randrange(F.q)) for _ in basis]
        comps = []
        for v in range(2):
            m = Mat.zeros(F, rt.dims[v], rs.dims[v])
            for c, b in zip(coeffs, basis):
                m = Mat(m.nrows, m.ncols, tuple(tuple(F.add(x, F.mul(c, y)) for x, y in zip(r1, r2))
                                                for r1, r2 in zip(m.data, b[v].data)))
            comps.append(m)
        out.append(ModuleMap(K, tuple(src), tuple(tgt), tuple(comps)))
    return out


def suite_kronecker_cones(bounds):
    from .derived import canonical_preprojective_map, kernel_cokernel
    res = SuiteResult("Kronecker cones vs oracle kernel/cokernel")
    F = FiniteField(5)
    cfg = O.OracleConfig(max_total_dimension=2 * bounds["kronecker_dim"] + 4, field_for_enumeration=F)
    pts, _ = kronecker_points(F)
    for pt in pts:
        for n in range(1, bounds["cone_n"] + 1):
            res.cases += 1
            f = canonical_preprojective_map(F, n, pt)
            cone = cone_of_module_map(f)
            if [M for _, M in cone.summands] != [Regular(pt)] or cone.summands[0][0] != 0:
                res.failures.append(("canonical", n, pt, cone))
    rng = random.Random(3)
    for f in random_kronecker_maps(rng, F, bounds["random"] // 4, bounds["kronecker_dim"]):
        res.cases += 1
        ker, coker = kernel_cokernel(f)
        oc = O.mapping_cone_homology(f, cfg)
        ok = all(O.isomorphic(oc[d], O.oracle_sum([O.oracle_rep(M, F) for M in mods]), F, cfg)
                 for d, mods in ((-1, ker), (0, coker)))
        if not ok:
            res.failures.append(("random", f.source, f.target, ker, coker))
    return res


def suite_localized(bounds):
    res = SuiteResult("Z[1/S] Hom/Ext vs colimit oracle")
    from .indec import LocalizedFree
    for S in ([2], [3], [2, 3], [5]):
        L = LocalizedFree(primes(S))
        for M in z_catalog(prime_powers_upto(bounds["prime_power"])):
            res.cases += 1
            h, e = hom_invariants(M, L)
            oh, oe = O.snf_hom_ext([M], [L])
            if not (oh.matches(h) and oe.matches(e)):
                res.failures.append((M, L, h, e, oh, oe))
    return res


def suite_dynkin_hom_ext(bounds):
    res = SuiteResult("A_n Hom/Ext vs quiver oracle")
    for n in range(1, bounds["dynkin_n"] + 1):
        A = DynkinAn(n)
        cat = dynkin_catalog(n)
        for X in cat:
            for Y in cat:
                res.cases += 1
                if tuple(hom_invariants(X, Y, A)) != O.intertwiner_dims(X, Y, Rational()):
                    res.failures.append((n, X, Y))
    return res


SUITES = (suite_z_hom_ext, suite_localized, suite_kronecker_hom_ext, suite_euler_serre,
          suite_z_cones, suite_kronecker_cones, suite_dynkin_hom_ext)


def run(bounds="full"):
    b = BOUNDS[bounds]
    out = []
    for suite in SUITES:
        t = time.perf_counter()
        r = suite(b)
        r.seconds = time.perf_counter() - t
        out.append(r)
    return out
