import pytest

import dynkin_family as DF
from metric_completion import metric as Mt
from metric_completion import thick as T
from metric_completion.indec import DynkinAn, Interval


@pytest.mark.parametrize("n,catalan", [(1, 2), (2, 5), (3, 14), (4, 42)])
def test_thick_subcategory_count_is_catalan(n, catalan):
    # thick subcategories of D^b(A_n) <-> noncrossing partitions of n+1 points
    assert len(DF.thick_subcategories(DynkinAn(n))) == catalan


def test_closure_examples():
    A = DynkinAn(2)
    assert T.thick_closure(A, [Interval(1, 1), Interval(2, 2)]).is_all()
    assert str(T.thick_closure(A, [Interval(1, 2)])) == "Thick{M(1,2)}"
    assert T.equal(T.join(T.thick_closure(A, [Interval(1, 1)]), T.thick_closure(A, [Interval(1, 2)])),
                   T.everything_in(A))


@pytest.mark.parametrize("n", [2, 3])
def test_decomposition_identity(n):
    count, failures, sensitive = DF.check(n)
    assert count >= (400 if n == 2 else 6000)
    assert failures == []
    assert sensitive


def test_family_covers_windows_and_zones():
    metrics = list(DF.family(2))
    assert {(M.lower is not None, M.upper is not None) for M in metrics} == {
        (a, b) for a in (False, True) for b in (False, True)}
    assert len({M.lower_chain for M in metrics if M.lower is not None}) >= 5
    assert any(Mt.normal_form_text(M).startswith("window (-n, n]") for M in metrics)
