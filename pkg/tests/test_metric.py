import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from families import KQ, Z, member, metrics, sample, semantic_finer
from metric_completion import metric as Mt
from metric_completion import thick as T
from metric_completion.derived import SplitObject as S
from metric_completion.errors import InvalidSchedule, MixedRings
from metric_completion.fields import PointUniverse, Rational, point
from metric_completion.indec import Kronecker, Preprojective, Regular, ZFree, ZTorsion
from metric_completion.labels import finite, primes
from metric_completion.metric import (Verdict, ball_contains, constant_chain, converges_uniformly,
                                      equivalent, finer_leq, join, kernel_B, linear_edge, meet,
                                      mk_aisle, mk_coaisle, mk_constant, mk_nf, mk_t_structure,
                                      mk_tail, normal_form_text, t_submetric)

PROPS = settings(max_examples=200, derandomize=True, deadline=None,
                 suppress_health_check=list(HealthCheck))
C23 = T.torsion(primes([2, 3]))


# --- constructors and normal forms ----------------------------------------------------

def test_normal_forms():
    assert normal_form_text(mk_t_structure(Z)) == "window (-n, n]; chain 0"
    assert normal_form_text(mk_aisle(Z)) == "window (-n, +inf]; chain 0"
    assert normal_form_text(mk_coaisle(Z)) == "window (-inf, n]; chain 0"
    assert normal_form_text(mk_constant(T.torsion(primes([2])))) == "window (-inf, +inf]; chain Torsion({2})"
    assert normal_form_text(mk_tail()) == "window (-inf, +inf]; chain PrimeTail({p >= p_(n-1)})"
    assert mk_nf(Z, constant_chain(T.zero(Z)), linear_edge(), linear_edge()) == mk_t_structure(Z)


def test_tail_metric_levels():
    M = mk_tail()
    assert str(M.central.at(1).labels) == "all"
    assert str(M.central.at(3).labels) == "{p >= 5}"


def test_invalid_schedules():
    with pytest.raises(InvalidSchedule, match="grow"):
        Mt.EdgeSchedule((0, 0))
    with pytest.raises(InvalidSchedule, match="nonnegative"):
        Mt.EdgeSchedule((-1,))
    with pytest.raises(InvalidSchedule, match="descending"):
        Mt.prefix_chain([T.torsion(primes([2]))], T.torsion(primes([3])))
    with pytest.raises(InvalidSchedule, match="inside"):
        Mt.mk_zoned(Z, constant_chain(C23), linear_edge(), constant_chain(T.torsion(primes([2]))))
    with pytest.raises(MixedRings):
        meet(mk_tail(), mk_t_structure(Kronecker(Rational())))


# --- balls ------------------------------------------------------------------------------

def test_ball_examples():
    assert ball_contains(mk_tail(), 3, S.module(ZTorsion(2, 1))) is Verdict.OUT
    assert ball_contains(mk_tail(), 3, S.module(ZTorsion(5, 1))) is Verdict.IN
    for M in (mk_tail(), mk_t_structure(Z), mk_constant(T.zero(Z))):
        assert ball_contains(M, 4, S()) is Verdict.IN
    assert ball_contains(mk_t_structure(Z), 2, S.of((-5, ZFree()))) is Verdict.IN
    assert ball_contains(mk_t_structure(Z), 2, S.of((-1, ZFree()))) is Verdict.OUT
    assert ball_contains(mk_t_structure(Z), 2, S.of((3, ZFree()))) is Verdict.IN


def test_boundary_unknown_only_next_to_kronecker_edges():
    K = Kronecker(Rational())
    M = mk_t_structure(K)
    P = Preprojective(0)
    assert ball_contains(M, 2, S.of((-1, P))) is Verdict.BOUNDARY_UNKNOWN
    assert ball_contains(M, 2, S.of((0, P))) is Verdict.OUT
    assert ball_contains(M, 2, S.of((-2, P))) is Verdict.IN
    lam = point(Rational(), 1, 0)
    C = mk_constant(T.regular_part(K, finite(PointUniverse(Rational()), [lam])))
    assert ball_contains(C, 1, S.of((0, Regular(lam, 3)))) is Verdict.IN
    assert ball_contains(C, 1, S.of((0, P))) is Verdict.OUT


@PROPS
@given(metrics(Z), st.integers(1, 6), st.lists(st.tuples(st.integers(-8, 8), st.sampled_from(
    [ZFree(), ZTorsion(2, 1), ZTorsion(3, 2), ZTorsion(13, 1), ZTorsion(101, 1)])), max_size=4))
def test_z_balls_are_two_valued(M, n, summands):
    assert ball_contains(M, n, S(tuple(summands))) is not Verdict.BOUNDARY_UNKNOWN


# --- lattice examples -----------------------------------------------------------------------

def test_lattice_examples():
    assert join(mk_aisle(Z), mk_coaisle(Z)) == mk_t_structure(Z)
    assert meet(mk_constant(C23), mk_constant(T.torsion(primes([3, 5])))) == mk_constant(T.torsion(primes([3])))
    assert join(mk_tail(), mk_constant(T.zero(Z))) == mk_tail()
    assert finer_leq(mk_constant(T.zero(Z)), mk_tail())
    assert finer_leq(mk_constant(T.zero(Z)), mk_aisle(Z))
    assert equivalent(mk_tail(), mk_tail(step=2))
    assert not finer_leq(mk_constant(T.torsion_all()), mk_constant(T.torsion(primes([2]))))
    assert finer_leq(mk_tail(), mk_constant(T.torsion_all()))
    assert not finer_leq(mk_constant(T.torsion_all()), mk_tail())


def test_t_submetric():
    M = t_submetric(mk_constant(C23))
    assert normal_form_text(M) == "window (-n, n]; chain 0; lower Torsion({2, 3}); upper Torsion({2, 3})"
    assert t_submetric(mk_t_structure(Z)) == mk_t_structure(Z)
    W = t_submetric(mk_tail())
    assert finer_leq(W, mk_tail()) and finer_leq(W, mk_t_structure(Z))
    assert not finer_leq(mk_tail(), W)
    assert normal_form_text(W) == ("window (-n, n]; chain 0; lower PrimeTail({p >= p_(n-1)}); "
                                   "upper PrimeTail({p >= p_(n-1)})")


def test_kernel_and_uniform_convergence():
    assert kernel_B(mk_tail()).is_zero()
    assert T.equal(kernel_B(mk_constant(C23)), C23)
    assert kernel_B(mk_t_structure(Z)).is_zero()
    assert converges_uniformly(mk_constant(C23))
    assert not converges_uniformly(mk_tail())
    M = mk_nf(Z, constant_chain(C23), linear_edge(), linear_edge())
    assert converges_uniformly(M)
    assert equivalent(M, join(t_submetric(M), mk_constant(C23)))


@PROPS
@given(st.sampled_from([Z, KQ]).flatmap(metrics))
def test_uniform_convergence_is_chain_stabilization(M):
    # M ~ M∞ ∨ B, decided semantically, agrees with the stabilization test
    D = join(t_submetric(M), mk_constant(kernel_B(M)))
    levels, mmax = (6, 24) if M.ring == Z else (5, 16)
    semantic = semantic_finer(M, D, levels=levels, mmax=mmax) and semantic_finer(D, M, levels=levels, mmax=mmax)
    assert converges_uniformly(M) == equivalent(M, D) == semantic


# --- lattice laws over generated families -------------------------------------------------

def _laws(M, N, P):
    eq = equivalent
    assert eq(meet(M, M), M) and eq(join(M, M), M)
    assert eq(meet(M, N), meet(N, M)) and eq(join(M, N), join(N, M))
    assert eq(meet(M, join(M, N)), M) and eq(join(M, meet(M, N)), M)
    assert eq(meet(meet(M, N), P), meet(M, meet(N, P)))
    assert eq(join(join(M, N), P), join(M, join(N, P)))
    mn, jn = meet(M, N), join(M, N)
    assert finer_leq(mn, M) and finer_leq(mn, N) and finer_leq(M, jn) and finer_leq(N, jn)
    assert finer_leq(M, M)
    if finer_leq(M, N) and finer_leq(N, P):
        assert finer_leq(M, P)
    if finer_leq(P, M) and finer_leq(P, N):
        assert finer_leq(P, mn)
    if finer_leq(M, P) and finer_leq(N, P):
        assert finer_leq(jn, P)
    assert finer_leq(M, N) == eq(meet(M, N), M) == eq(join(M, N), N)
    for A, B in ((M, N), (mn, meet(N, M)), (meet(M, jn), M)):
        if eq(A, B):
            assert T.equal(kernel_B(A), kernel_B(B))


@PROPS
@given(metrics(Z), metrics(Z), metrics(Z))
def test_lattice_laws_Z(M, N, P):
    _laws(M, N, P)


@PROPS
@given(metrics(KQ), metrics(KQ), metrics(KQ))
def test_lattice_laws_kronecker(M, N, P):
    _laws(M, N, P)


def _levelwise(M, N):
    mn, jn = meet(M, N), join(M, N)
    for n in range(1, 5):
        for i, X in sample(M, n, N, n):
            a, b = member(M, n, i, X), member(N, n, i, X)
            if member(mn, n, i, X):
                assert a and b
            if a or b:
                assert member(jn, n, i, X)


@PROPS
@given(metrics(Z), metrics(Z))
def test_meet_join_levelwise_Z(M, N):
    _levelwise(M, N)


@PROPS
@given(metrics(KQ), metrics(KQ))
def test_meet_join_levelwise_kronecker(M, N):
    _levelwise(M, N)


@PROPS
@given(metrics(Z), metrics(Z))
def test_finer_leq_matches_semantics_Z(M, N):
    assert finer_leq(M, N) == semantic_finer(M, N)


@PROPS
@given(metrics(KQ), metrics(KQ))
def test_finer_leq_matches_semantics_kronecker(M, N):
    assert finer_leq(M, N) == semantic_finer(M, N, levels=5, mmax=16)
