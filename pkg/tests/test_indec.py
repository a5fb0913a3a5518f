import pytest

from metric_completion import oracle as O
from metric_completion.errors import InjectiveArgument, MixedRings, ProjectiveArgument, WrongRing
from metric_completion.fields import FiniteField, Rational, SymbolicUncountable, formal_point, point
from metric_completion.indec import (AbelianGroup, DynkinAn, Interval, Kronecker, Preinjective,
                                     Preprojective, Regular, ZFree, ZTorsion, defect, dim_vector,
                                     dynkin_catalog, euler_form, hom_invariants, is_exceptional,
                                     is_exceptional_sequence, kronecker_catalog, tau, tau_inverse)

Q = Rational()
P0, P1, P2 = Preprojective(0), Preprojective(1), Preprojective(2)


def R(x, y, k=1, F=Q):
    return Regular(point(F, x, y), k)


# frozen values, each cross-checked against the oracle in the same test

def test_z_hom_ext_coprime_torsion():
    h = hom_invariants(ZTorsion(2, 2), ZTorsion(3, 1))
    assert (h.hom, h.ext) == (AbelianGroup(), AbelianGroup())
    oh, oe = O.snf_hom_ext([ZTorsion(2, 2)], [ZTorsion(3, 1)])
    assert oh.is_zero and oe.is_zero


def test_z_hom_free_free():
    h = hom_invariants(ZFree(), ZFree())
    assert h.hom == AbelianGroup(1) and not h.ext


@pytest.mark.parametrize("M,N,hom,ext", [
    (ZTorsion(2, 1), ZFree(), "0", "Z/2"),
    (ZFree(), ZTorsion(5, 1), "Z/5", "0"),
    (ZTorsion(2, 2), ZTorsion(2, 3), "Z/4", "Z/4"),
    (ZTorsion(3, 3), ZTorsion(3, 1), "Z/3", "Z/3"),
])
def test_z_hom_ext_table(M, N, hom, ext):
    h = hom_invariants(M, N)
    assert (str(h.hom), str(h.ext)) == (hom, ext)
    oh, oe = O.snf_hom_ext([M], [N])
    assert oh.matches(h.hom) and oe.matches(h.ext)


def test_kronecker_p0_p1():
    K = Kronecker(Q)
    h = hom_invariants(P0, P1, K)
    assert (h.hom, h.ext) == (2, 0) == O.intertwiner_dims(P0, P1, Q)


def test_tubes_orthogonal():
    K = Kronecker(Q)
    h = hom_invariants(R(1, 0), R(0, 1), K)
    assert (h.hom, h.ext) == (0, 0) == O.intertwiner_dims(R(1, 0), R(0, 1), Q)


def test_homogeneous_simple_regular_self_ext():
    assert O.intertwiner_dims(R(1, 0), R(1, 0), Q) == (1, 1)
    h = hom_invariants(R(1, 0), R(1, 0), Kronecker(Q))
    assert (h.hom, h.ext) == (1, 1)


def test_mixed_rings():
    with pytest.raises(MixedRings):
        hom_invariants(ZFree(), P0)


def test_symbolic_points_by_label():
    K = Kronecker(SymbolicUncountable())
    a, b = Regular(formal_point("t0")), Regular(formal_point("t1"))
    assert hom_invariants(a, b, K).hom == 0
    assert (hom_invariants(a, a, K).hom, hom_invariants(a, a, K).ext) == (1, 1)
    assert hom_invariants(P0, a, K).hom == 1


def test_euler_form():
    K = Kronecker(Q)
    assert euler_form((0, 1), (1, 2), K) == 2
    assert euler_form((1, 1), (1, 1), K) == 0
    assert euler_form((0, 0), (3, 4), K) == 0
    with pytest.raises(WrongRing):
        from metric_completion.indec import IntegerRing
        euler_form((1,), (1,), IntegerRing())


def test_tau():
    K = Kronecker(Q)
    assert tau(R(1, 1, 3), K) == R(1, 1, 3)
    # AR sequences 0 -> P_n -> P_{n+1}^2 -> P_{n+2} -> 0 move preprojectives by two
    assert tau(P2, K) == P0
    assert tau(Preprojective(7), K) == Preprojective(5)
    assert tau(Preinjective(0), K) == Preinjective(2)
    assert tau_inverse(P0, K) == P2
    assert tau_inverse(tau(Preprojective(4), K), K) == Preprojective(4)
    for X in (P0, P1):
        with pytest.raises(ProjectiveArgument):
            tau(X, K)
    for X in (Preinjective(0), Preinjective(1)):
        with pytest.raises(InjectiveArgument):
            tau_inverse(X, K)


def test_tau_matches_ar_dimension_count():
    # dim P_n + dim P_{n+2} = 2 dim P_{n+1}, the middle term of the AR sequence
    K = Kronecker(Q)
    for n in range(10):
        a, b = dim_vector(tau(Preprojective(n + 2), K)), dim_vector(Preprojective(n + 2))
        mid = dim_vector(Preprojective(n + 1))
        assert tuple(x + y for x, y in zip(a, b)) == tuple(2 * m for m in mid)


def test_defect():
    for n in range(21):
        assert defect(dim_vector(Preprojective(n))) == -1
        assert defect(dim_vector(Preinjective(n))) == 1
    assert defect((4, 4)) == 0
    assert dim_vector(Preprojective(3)) == (3, 4)
    assert dim_vector(Preinjective(3)) == (4, 3)
    assert dim_vector(R(1, 0, 5)) == (5, 5)


def test_exceptional():
    K = Kronecker(Q)
    assert is_exceptional(P0, K)
    assert not is_exceptional(R(1, 0), K)
    assert is_exceptional_sequence([P0, P1], K)
    assert not is_exceptional_sequence([P1, P0], K)
    assert O.intertwiner_dims(P1, P0, Q) == (0, 0)
    with pytest.raises(WrongRing):
        is_exceptional(ZFree())


def test_directionality():
    K = Kronecker(FiniteField(5))
    cat = kronecker_catalog([point(FiniteField(5), 1, c) for c in range(5)], 8)
    for X in cat:
        for Y in cat:
            h = hom_invariants(X, Y, K).hom
            if isinstance(X, Regular) and isinstance(Y, Preprojective):
                assert h == 0
            if isinstance(X, Preinjective) and isinstance(Y, (Preprojective, Regular)):
                assert h == 0
            if isinstance(X, Regular) and isinstance(Y, Regular) and X.point != Y.point:
                assert h == 0 and hom_invariants(X, Y, K).ext == 0


def test_dynkin_catalog_and_hom():
    A3 = DynkinAn(3)
    cat = dynkin_catalog(3)
    assert len(cat) == 6
    for X in cat:
        for Y in cat:
            h = hom_invariants(X, Y, A3)
            assert h.hom - h.ext == euler_form(dim_vector(X), dim_vector(Y), A3)
            assert (h.hom, h.ext) == O.intertwiner_dims(X, Y, Q)
    assert hom_invariants(Interval(1, 3), Interval(1, 3), A3).hom == 1
