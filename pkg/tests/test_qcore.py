from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from conftest import fbinom, fpoch, mp_of, qs, rationals, rel
from qhahn.errors import DomainError, OutOfRange
from qhahn.qcore import gauss_binom, gauss_binom_row, qpoch, qpoch_inf, qpoch_list, qpoch_multi
from qhahn.scalar import QValue, Scalar, TailConfig

H = Fraction(1, 2)


def test_qpoch_small_cases():
    assert qpoch(Fraction(1, 3), H, 0) == 1
    assert qpoch(1, H, 3).is_zero()
    assert qpoch(H, H, 2) == Scalar(Fraction(3, 8))


def test_qpoch_rejects_negative_order():
    with pytest.raises(Exception):
        qpoch(H, H, -1)


def test_q_outside_unit_disc_is_rejected():
    with pytest.raises(DomainError):
        QValue(Scalar(1))
    with pytest.raises(DomainError):
        QValue(Scalar(0))


@given(a=rationals(-2, 2), q=qs, n=st.integers(0, 25))
def test_qpoch_matches_exact_product(a, q, n):
    assert rel(qpoch(a, q, n), fpoch(a, q, n)) < 1e-70


@given(a=rationals(-2, 2), q=qs, n=st.integers(0, 15))
def test_qpoch_list_prefixes(a, q, n):
    lst = qpoch_list(a, q, n)
    assert len(lst) == n + 1
    for k in (0, n // 2, n):
        assert rel(lst[k], fpoch(a, q, k)) < 1e-70


def test_qpoch_multi_is_a_product():
    q = QValue(Scalar(H))
    got = qpoch_multi([Fraction(1, 3), Fraction(1, 5)], q, 4)
    assert rel(got, fpoch(Fraction(1, 3), H, 4) * fpoch(Fraction(1, 5), H, 4)) < 1e-70


def test_qpoch_inf_at_half():
    got = qpoch_inf(H, H, TailConfig(Scalar(Fraction(1, 10**12))))
    assert abs(float(got) - 0.288788095) < 1e-9
    fixed = mpmath.mpf(1)
    for k in range(400):
        fixed *= 1 - mpmath.mpf(2) ** -(k + 1)
    assert rel(qpoch_inf(H, H), fixed) < 1e-38


def test_qpoch_inf_zero_and_split():
    assert qpoch_inf(0, H) == 1
    head = qpoch(H, H, 40)
    rest = qpoch_inf(H * H**40, H)
    assert rel(qpoch_inf(H, H), head * rest) < 1e-38


@given(a=rationals(-1, 1), q=qs)
def test_qpoch_inf_matches_mpmath(a, q):
    want = mpmath.qp(mp_of(a), mp_of(q))
    assert rel(qpoch_inf(a, q), want) < 1e-38


def test_gauss_binom_examples():
    assert gauss_binom(7, 0, H) == 1
    assert gauss_binom(4, 2, H) == Scalar(Fraction(35, 16))
    assert rel(gauss_binom(5, 2, Fraction(1, 3)), gauss_binom(5, 3, Fraction(1, 3))) < 1e-70
    with pytest.raises(OutOfRange):
        gauss_binom(3, 4, H)


@given(n=st.integers(0, 20), q=qs)
def test_gauss_binom_row_exact(n, q):
    row = gauss_binom_row(n, q)
    for k in range(n + 1):
        assert rel(row[k], fbinom(n, k, q)) < 1e-70
        assert rel(gauss_binom(n, k, q), fbinom(n, k, q)) < 1e-70


@given(n=st.integers(1, 15), q=qs, data=st.data())
def test_q_pascal(n, q, data):
    k = data.draw(st.integers(1, n))
    lhs = gauss_binom(n + 1, k, q)
    rhs = gauss_binom(n, k - 1, q) + Scalar(q) ** k * gauss_binom(n, k, q)
    assert rel(lhs, rhs) < 1e-70
