"""Acceptance suite: one PASS/FAIL line per criterion, printed even when
pytest captures output."""
import itertools
import time

from hypothesis import HealthCheck, given, settings

import dynkin_family as DF
from completion_cases import CASES, member_samples, non_member_samples
from families import KQ, Z, metrics, semantic_finer
from metric_completion import metric as Mt
from metric_completion import oracle as O
from metric_completion import selftest
from metric_completion import thick as T
from metric_completion.cauchy import hocolim_model, is_cauchy, small_object_sequence
from metric_completion.classify import classify, compact_support_index, is_member
from metric_completion.derived import SplitObject as S
from metric_completion.derived import canonical_preprojective_map, cone_of_module_map, hom_at, multiplication_map
from metric_completion.fields import PointUniverse, Rational, SymbolicUncountable, formal_point, point
from metric_completion.indec import (Kronecker, KroneckerColimit, LocalizedFree, Preprojective, Regular, ZFree,
                                     ZTorsion, prime_powers_upto, z_catalog)
from metric_completion.labels import cofinite, finite, primes
from test_metric import _laws, _levelwise


def _criterion(capsys, n, title, body, limit=None):
    t = time.perf_counter()
    err, detail = None, ""
    try:
        detail = body() or ""
    except AssertionError as e:
        err = e
    dt = time.perf_counter() - t
    slow = limit is not None and dt >= limit
    ok = err is None and not slow
    budget = f" (limit {limit} s)" if limit is not None else ""
    with capsys.disabled():
        print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {title}  [{dt:.2f} s{budget}]"
              + (f"  {detail}" if detail else ""))
    if err is not None:
        raise err
    assert not slow, f"criterion {n} took {dt:.2f} s, limit {limit} s"


def test_criterion_1_integers_constant_torsion_two(capsys):
    def body():
        C = T.torsion(primes([2]))
        R = classify(Z, Mt.mk_constant(C))
        assert (R.case, str(R.category)) == ("I", "D^b(mod Z[1/2])")
        seq = small_object_sequence(Z, C, S.module(ZFree()), 10)
        assert [w.k for w in seq.maps] == [2] * 10
        assert all(c == S.module(ZTorsion(2, 1)) for c in seq.cones())
        assert O.mapping_cone_homology(multiplication_map(2)) == {0: O.ZType(0, ((2, 1),))}
        assert is_cauchy(seq, Mt.mk_constant(C), 10).ok
        h = hocolim_model(seq)
        assert h.object == S.module(LocalizedFree(primes([2])))
        assert all(line.endswith("True") for _, line in h.map_checks)
        return "case I, D^b(mod Z[1/2]); *2 chain; cones Z/2; hocolim Z[1/2]"
    _criterion(capsys, 1, "Z with constant <Z/2>", body, limit=1.0)


def test_criterion_2_integers_tail_and_torsion(capsys):
    def body():
        R = classify(Z, Mt.mk_tail())
        assert (R.case, R.category.variant, str(R.category)) == ("II", "ThickInsideS", "ThickInsideS(Torsion(all))")
        Q = classify(Z, Mt.mk_constant(T.torsion_all()))
        assert (Q.case, str(Q.category)) == ("I", "D^b(mod Q)")
        return "tail: case II, ThickInsideS(Torsion(all)); constant torsion: case I, D^b(mod Q)"
    _criterion(capsys, 2, "Z with the prime tail and constant torsion", body, limit=1.0)


def test_criterion_3_kronecker_tube(capsys):
    def body():
        F = Rational()
        K = Kronecker(F)
        for lam in (point(F, 1, 0), point(F, 0, 1), point(F, 1, 1), point(F, 2, 3)):
            D = finite(PointUniverse(F), [lam])
            C = T.regular_part(K, D)
            R = classify(K, Mt.mk_constant(C))
            assert R.case == "I" and R.category.variant == "KroneckerLocalisation"
            for n in range(1, 6):
                assert cone_of_module_map(canonical_preprojective_map(F, n, lam)) == S.module(Regular(lam, 1))
            seq = small_object_sequence(K, C, S.module(Preprojective(0)), 5)
            assert is_cauchy(seq, Mt.mk_constant(C), 5).ok
            assert hocolim_model(seq).object == S.module(KroneckerColimit(D))
        return "4 rational points: case I, cones Regular(lambda, 1) for n <= 5, hocolim E"
    _criterion(capsys, 3, "Kronecker with constant <R_lambda>", body, limit=1.0)


def _z_sums_sweep(max_pp):
    """Every pair of direct sums of catalog modules with at most four
    summands in total, through graded_hom against the oracle."""
    cat = z_catalog(prime_powers_upto(max_pp))
    sums = {r: list(itertools.combinations_with_replacement(cat, r)) for r in (1, 2, 3)}
    count = 0
    for r, s in ((1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2)):
        for A in sums[r]:
            X = S.of(*((0, M) for M in A))
            for B in sums[s]:
                Y = S.of(*((0, N) for N in B))
                oh, oe = O.snf_hom_ext(list(A), list(B))
                assert oh.matches(hom_at(X, Y, 0)) and oe.matches(hom_at(X, Y, 1)), (A, B)
                count += 1
    return count


def test_criterion_4_oracle_equivalence(capsys):
    def body():
        b = selftest.BOUNDS["full"]
        results = [selftest.suite_z_hom_ext(b), selftest.suite_localized(b), selftest.suite_kronecker_hom_ext(b)]
        for r in results:
            assert r.ok, (r.name, r.failures[:3])
        swept = _z_sums_sweep(b["prime_power"])
        return ", ".join(f"{r.name}: {r.cases}" for r in results) + f", direct sums: {swept}"
    _criterion(capsys, 4, "Hom/Ext against brute-force oracles", body, limit=60.0)


def test_criterion_5_euler_and_serre(capsys):
    def body():
        r = selftest.suite_euler_serre(selftest.BOUNDS["full"])
        assert r.ok, r.failures[:3]
        return f"{r.cases} pairs"
    _criterion(capsys, 5, "Euler form and Auslander-Reiten formula", body)


PAIRS = settings(max_examples=200, derandomize=True, deadline=None, suppress_health_check=list(HealthCheck))


def _lattice_run(ring, levels, mmax):
    seen = []

    @PAIRS
    @given(metrics(ring), metrics(ring), metrics(ring))
    def run(M, N, P):
        seen.append(1)
        _laws(M, N, P)
        _levelwise(M, N)
        assert Mt.finer_leq(M, N) == semantic_finer(M, N, levels=levels, mmax=mmax)

    run()
    return len(seen)


def test_criterion_6_lattice_laws(capsys):
    def body():
        nz = _lattice_run(Z, 6, 24)
        nk = _lattice_run(KQ, 5, 16)
        assert nz >= 200 and nk >= 200
        return f"{nz} generated triples over Z, {nk} over the Kronecker algebra"
    _criterion(capsys, 6, "lattice laws on generated normal forms", body)


def test_criterion_7_dynkin_decomposition(capsys):
    def body():
        out = []
        for n in (2, 3):
            count, failures, sensitive = DF.check(n)
            assert failures == [] and sensitive
            out.append(f"A{n}: {count} metrics")
        return ", ".join(out)
    _criterion(capsys, 7, "decomposition N ~ join (N meet <M>) over A_n", body, limit=30.0)


def test_criterion_8_uncountable_branch(capsys):
    def body():
        F = SymbolicUncountable()
        K = Kronecker(F)
        R = classify(K, Mt.mk_constant(T.regular_all(K)))
        assert (R.case, R.countably_generated, R.category.variant) == ("II", False, "ZeroCategory")
        t0 = formal_point("t0")
        C = classify(K, Mt.mk_constant(T.regular_part(K, cofinite(PointUniverse(F), [t0]))))
        assert (C.case, C.countably_generated, C.category.variant) == ("II", False, "ThickInsideS")
        assert T.equal(C.category.thick, T.regular_part(K, finite(PointUniverse(F), [t0])))
        return "RegularPart(all) -> 0; RegularPart(all except {t0}) -> ThickInsideS(RegularPart({t0}))"
    _criterion(capsys, 8, "uncountable field", body)


def test_criterion_9_compact_support_soundness(capsys):
    def body():
        checked = rejected = 0
        for case in CASES:
            name, ring, M = case[:3]
            cat = classify(ring, M).category
            members = member_samples(case, 50)
            for X in members:
                assert is_member(cat, X), (name, X)
                assert compact_support_index(X, M).present, (name, X)
            checked += len(members)
            if cat.variant == "ThickInsideS":
                others = non_member_samples(case, 50)
                assert not any(is_member(cat, X) for X in others), name
                rejected += len(others)
        return f"{len(CASES)} classify outputs, {checked} members supported, {rejected} non-members rejected"
    _criterion(capsys, 9, "compact-support soundness", body)

