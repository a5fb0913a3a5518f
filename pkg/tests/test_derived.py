import random

import pytest

from metric_completion import oracle as O
from metric_completion.derived import (ModuleMap, SplitObject, canonical_preprojective_map,
                                       cohomology, cone_of_module_map, graded_hom, identity_map,
                                       integer_map, k0_class, multiplication_map, shift, support_Z)
from metric_completion.errors import MixedRings, NonIntertwining, WrongRing
from metric_completion.fields import FiniteField, Rational, point
from metric_completion.indec import (AbelianGroup, IntegerRing, Kronecker, LocalizedFree,
                                     Preprojective, Regular, ZFree, ZTorsion)
from metric_completion.labels import primes
from metric_completion.selftest import random_integer_maps, random_kronecker_maps

Q = Rational()
S = SplitObject
ZZ = IntegerRing()


def test_shift():
    assert shift(S(), 3) == S()
    assert shift(S.module(ZFree()), 1) == S.of((-1, ZFree()))
    X = S.of((0, ZFree()), (2, ZTorsion(3, 1)))
    assert shift(X, 0) == X
    assert shift(shift(X, 2), -5) == shift(X, -3)


def test_split_object_multiset_and_printing():
    X = S.of((0, ZTorsion(2, 1)), (0, ZTorsion(2, 1)), (1, ZFree()))
    assert str(X) == "Z/2^2 + Z@1"
    assert X == S.of((1, ZFree()), (0, ZTorsion(2, 1)), (0, ZTorsion(2, 1)))
    assert cohomology(X) == {0: [ZTorsion(2, 1), ZTorsion(2, 1)], 1: [ZFree()]}
    assert X.bounds() == (0, 1)
    with pytest.raises(MixedRings):
        S.of((0, ZFree()), (0, Preprojective(0)))


def test_graded_hom_examples():
    g = graded_hom(S.module(ZTorsion(2, 1)), S.module(ZFree()))
    assert g == {1: AbelianGroup.cyclic(2, 1)}
    oh, oe = O.snf_hom_ext([ZTorsion(2, 1)], [ZFree()])
    assert oh.is_zero and oe.matches(g[1])
    assert graded_hom(S.module(ZFree()), S.module(ZFree())) == {0: AbelianGroup(1)}
    g = graded_hom(S.module(Regular(point(Q, 1, 0))), S.module(Preprojective(0)))
    assert set(g) == {1} and g[1] >= 1


def test_graded_hom_shift_rule():
    rng = random.Random(0)
    mods = [ZFree(), ZTorsion(2, 1), ZTorsion(2, 3), ZTorsion(3, 1)]
    for _ in range(50):
        X = S(tuple((rng.randint(-2, 2), rng.choice(mods)) for _ in range(rng.randint(0, 3))))
        Y = S(tuple((rng.randint(-2, 2), rng.choice(mods)) for _ in range(rng.randint(0, 3))))
        k = rng.randint(-3, 3)
        a, b = graded_hom(X, shift(Y, k)), graded_hom(X, Y)
        assert a == {j - k: v for j, v in b.items()}
        if all(d == 0 for d, _ in X.summands + Y.summands):
            assert set(b) <= {0, 1}


def test_cone_examples():
    assert cone_of_module_map(multiplication_map(2)) == S.module(ZTorsion(2, 1))
    assert O.mapping_cone_homology(multiplication_map(2)) == {0: O.ZType(0, ((2, 1),))}
    assert cone_of_module_map(identity_map(ZZ, [ZFree(), ZTorsion(3, 2)])) == S()
    f = canonical_preprojective_map(Q, 1, point(Q, 1, 0))
    assert cone_of_module_map(f) == S.module(Regular(point(Q, 1, 0)))


def test_cone_of_zero_map_splits():
    f = integer_map([ZTorsion(3, 1)], [ZFree()], ((0,),))
    assert cone_of_module_map(f) == S.of((-1, ZTorsion(3, 1)), (0, ZFree()))


@pytest.mark.parametrize("n", range(1, 6))
def test_canonical_cones_are_simple_regulars(n):
    F = FiniteField(5)
    for c in range(5):
        pt = point(F, 1, c)
        assert cone_of_module_map(canonical_preprojective_map(F, n, pt)) == S.module(Regular(pt))


def test_integer_cones_match_oracle():
    for f in random_integer_maps(random.Random(11), 150):
        main = {}
        for d, M in cone_of_module_map(f).summands:
            g = AbelianGroup(1) if isinstance(M, ZFree) else AbelianGroup.cyclic(M.p, M.k)
            main[d] = main[d] + g if d in main else g
        oracle = O.mapping_cone_homology(f)
        assert set(main) == set(oracle)
        assert all(oracle[d].matches(main[d]) for d in main)


def test_kronecker_cones_match_oracle():
    F = FiniteField(5)
    cfg = O.OracleConfig(max_total_dimension=20, field_for_enumeration=F)
    for f in random_kronecker_maps(random.Random(5), F, 30, 8):
        oc = O.mapping_cone_homology(f, cfg)
        cone = cone_of_module_map(f)
        for d in (-1, 0):
            mods = [M for e, M in cone.summands if e == d]
            assert O.isomorphic(oc[d], O.oracle_sum([O.oracle_rep(M, F) for M in mods]), F, cfg)


def test_non_intertwining():
    with pytest.raises(NonIntertwining):
        integer_map([ZTorsion(2, 1)], [ZFree()], ((1,),))
    with pytest.raises(NonIntertwining):
        integer_map([LocalizedFree(primes([2]))], [ZFree()], ((1,),))
    K = Kronecker(Q)
    with pytest.raises(NonIntertwining):
        # identity scalars R(1:0) -> R(0:1) do not commute with the arrows
        ModuleMap(K, (Regular(point(Q, 1, 0)),), (Regular(point(Q, 0, 1)),), (((1,),), ((1,),)))


def test_support():
    assert str(support_Z(S.of((0, ZTorsion(2, 1)), (3, ZTorsion(3, 2))))) == "{2, 3}"
    assert support_Z(S.module(ZFree())).generic
    assert str(support_Z(S())) == "{}"
    with pytest.raises(WrongRing):
        support_Z(S.module(Preprojective(0)))


def test_k0_class():
    assert k0_class(S.of((0, ZFree()), (1, ZFree()))) == k0_class(S())
    assert k0_class(shift(S.module(Preprojective(2)), 1)) != k0_class(S.module(Preprojective(2)))
