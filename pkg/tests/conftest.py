import pytest

from metric_completion import FiniteField, IntegerRing, Kronecker, Rational, SymbolicUncountable


@pytest.fixture
def ZZ():
    return IntegerRing()


@pytest.fixture
def KQ():
    return Kronecker(Rational())


@pytest.fixture
def K5():
    return Kronecker(FiniteField(5))


@pytest.fixture
def KU():
    return Kronecker(SymbolicUncountable())
