import pytest

from completion_cases import CASES, KQ, KU, LAM, Q, Z, member_samples, non_member_samples
from metric_completion import metric as Mt
from metric_completion import oracle as O
from metric_completion import thick as T
from metric_completion.classify import (CategoryDescriptor, classify, compact_support_index,
                                        derived_of_localized, is_member, thick_inside)
from metric_completion.derived import SplitObject as S
from metric_completion.derived import localized_free_object
from metric_completion.errors import MixedRings, UnsupportedRing
from metric_completion.indec import (DynkinAn, Preinjective, Preprojective, Regular, ZFree,
                                     ZTorsion)
from metric_completion.labels import primes

IDS = [c[0] for c in CASES]


@pytest.mark.parametrize("case", CASES, ids=IDS)
def test_classify_cases(case):
    _, ring, M, kind, text, _, _ = case
    R = classify(ring, M)
    assert R.case == kind
    assert str(R.category) == text
    assert (R.case == "I") == (R.converges_uniformly and R.countably_generated)
    assert R.evidence


def test_report_fields():
    R = classify(Z, Mt.mk_constant(T.torsion(primes([2]))))
    d = R.to_dict()
    assert list(d) == ["case", "kernel", "countablyGenerated", "convergesUniformly", "category", "evidence"]
    assert (d["case"], d["kernel"], d["category"]) == ("I", "Torsion({2})", "D^b(mod Z[1/2])")
    K = classify(KQ, CASES[6][2]).to_dict()
    assert K["generators"] == ["E", "tubes != (1:0)"]


def test_uncountable_branch():
    R = classify(KU, Mt.mk_constant(T.regular_all(KU)))
    assert (R.case, R.countably_generated, R.category.variant) == ("II", False, "ZeroCategory")
    C = classify(KU, CASES[-1][2])
    assert (C.case, C.countably_generated, C.category.variant) == ("II", False, "ThickInsideS")


def test_constant_metrics_match_localisation_models():
    for C in (T.torsion(primes([2])), T.torsion(primes([3, 7])), T.torsion_all(), T.zero(Z)):
        R = classify(Z, Mt.mk_constant(C))
        assert R.case == "I"
        assert R.category.labels == T.localisation_model(C).inverted


def test_classify_errors():
    A = DynkinAn(2)
    with pytest.raises(UnsupportedRing):
        classify(A, Mt.mk_constant(T.everything_in(A)))
    with pytest.raises(MixedRings):
        classify(Z, Mt.mk_t_structure(KQ))


def test_is_member_examples():
    Z2 = derived_of_localized(primes([2]))
    assert is_member(Z2, S.module(ZTorsion(3, 1)))
    assert not is_member(Z2, S.module(ZTorsion(2, 1)))
    assert is_member(Z2, localized_free_object(primes([2]), 4))
    assert not is_member(thick_inside(T.torsion_all()), S.module(ZFree()))
    assert is_member(CategoryDescriptor("ZeroCategory", Z), S())
    assert not is_member(CategoryDescriptor("ZeroCategory", Z), S.module(ZTorsion(5, 1)))


def test_compact_support_examples():
    M = Mt.mk_constant(T.torsion(primes([2])))
    assert compact_support_index(S.module(ZTorsion(3, 1)), M).index == 1
    assert compact_support_index(S(), M).index == 1
    assert compact_support_index(S(), Mt.mk_tail()).index == 1
    cs = compact_support_index(S.module(ZTorsion(2, 1)), M)
    assert not cs.present and cs.certified and cs.horizon == 2
    assert compact_support_index(localized_free_object(primes([2])), M).index == 1
    # the tail ball at level n is <Z/p : p >= p_(n-1)>, and 97 = p_25
    assert compact_support_index(S.module(ZTorsion(97, 1)), Mt.mk_tail()).index == 26
    assert compact_support_index(S.module(ZFree()), Mt.mk_tail()).present is False
    short = compact_support_index(S.module(ZTorsion(97, 1)), Mt.mk_tail(), horizon=5)
    assert not short.present and not short.certified


@pytest.mark.parametrize("case", CASES, ids=IDS)
def test_members_are_compactly_supported(case):
    ring, M = case[1], case[2]
    cat = classify(ring, M).category
    for X in member_samples(case):
        assert is_member(cat, X), X
        assert compact_support_index(X, M).present, X


@pytest.mark.parametrize("case", CASES, ids=IDS)
def test_non_members_rejected(case):
    cat = classify(case[1], case[2]).category
    for X in non_member_samples(case):
        assert not is_member(cat, X), X


@pytest.mark.parametrize("case", [c for c in CASES if c[3] == "II"], ids=lambda c: c[0])
def test_case_two_members_are_perpendicular_to_kernel(case):
    R = classify(case[1], case[2])
    for X in member_samples(case, seed=1):
        assert all(T.is_perpendicular(R.kernel, N) for _, N in X.summands)


@pytest.mark.parametrize("case", CASES, ids=IDS)
def test_members_closed_under_summands(case):
    cat = classify(case[1], case[2]).category
    for X in member_samples(case, seed=2):
        for d, N in X.summands:
            assert is_member(cat, S.of((d, N)))


def test_exceptional_perpendicularity_matches_oracle():
    mods = ([Preprojective(n) for n in range(4)] + [Preinjective(n) for n in range(3)]
            + [Regular(LAM, k) for k in (1, 2)])
    for E in (Preprojective(0), Preprojective(2), Preinjective(0), Preinjective(1)):
        C = T.exceptional(KQ, (E,))
        for N in mods:
            assert T.is_perpendicular(C, N) == (O.intertwiner_dims(E, N, Q) == (0, 0)), (E, N)
