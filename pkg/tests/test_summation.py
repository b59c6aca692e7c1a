from fractions import Fraction

import pytest

from conftest import rel
from qhahn.errors import TailNotReached
from qhahn.scalar import Scalar, TailConfig
from qhahn.summation import sum_indexed, sum_tail


def test_geometric():
    tail = TailConfig.for_prec(256)
    got = sum_indexed(lambda n: Scalar(Fraction(1, 3)) ** n, tail)
    assert rel(got, Fraction(3, 2)) < 1e-40


def test_finite_iterable_is_exact():
    assert sum_tail([Scalar(1), Scalar(2)], TailConfig.for_prec()) == Scalar(3)


def test_oscillating_magnitudes_use_the_envelope():
    # |terms| alternate between 2^-n and 4^-n; never monotone over 4 terms
    def term(n):
        base = Fraction(1, 2) if n % 2 else Fraction(1, 4)
        return Scalar(base) ** n

    got = sum_indexed(term, TailConfig.for_prec(256))
    want = sum(Fraction(1, 2) ** n if n % 2 else Fraction(1, 4) ** n for n in range(400))
    assert rel(got, want) < 1e-40


def test_divergent_series_raises():
    with pytest.raises(TailNotReached):
        sum_indexed(lambda n: Scalar(1), TailConfig(Scalar(Fraction(1, 10**10)), max_terms=200))


def test_trailing_zeros_terminate():
    assert sum_tail(iter([Scalar(1)] + [Scalar(0)] * 20), TailConfig.for_prec()) == Scalar(1)
