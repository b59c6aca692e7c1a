from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import fpoch, qs, rationals, rel
from qhahn.errors import SingularSeries
from qhahn.pseries import INF, SeriesT, SeriesTS, poch_series, ps_inv, ps_mul
from qhahn.qcore import qpoch_list
from qhahn.scalar import Scalar

H = Fraction(1, 2)


def S(*cs):
    return SeriesT(tuple(Scalar(c) for c in cs))


def test_small_products():
    assert ps_mul(S(1, 1, 0), S(1, -1, 0)).coeffs == S(1, 0, -1).coeffs
    A = S(2, 3, 5)
    assert ps_mul(A, S(1, 0, 0)).coeffs == A.coeffs
    assert ps_inv(S(1, -1, 0, 0)).coeffs == S(1, 1, 1, 1).coeffs
    assert ps_inv(S(1)).coeffs == S(1).coeffs


def test_inverse_of_zero_constant_term():
    with pytest.raises(SingularSeries):
        ps_inv(S(0, 1))


def test_euler_series_are_reciprocal():
    N = 12
    prod = ps_mul(ps_inv(poch_series(1, H, INF, N)), poch_series(1, H, INF, N))
    assert rel(prod[0], 1) < 1e-70
    for n in range(1, N + 1):
        assert abs(float(prod[n])) < 1e-70
    inv = ps_inv(poch_series(Fraction(1, 3), H, INF, N))
    qq = qpoch_list(H, H, N)
    for n in range(N + 1):
        assert rel(inv[n], Scalar(Fraction(1, 3)) ** n / qq[n]) < 1e-70


def test_finite_poch_series():
    c, q = Fraction(1, 3), H
    assert poch_series(c, q, 0, 4).coeffs == S(1, 0, 0, 0, 0).coeffs
    two = poch_series(c, q, 2, 3)
    for got, want in zip(two.coeffs, (1, -c * (1 + q), c * c * q, 0)):
        assert rel(got, want) < 1e-70


def test_inverse_matches_long_division():
    # 1/((1 - t/2)(1 - t/4)) = sum_n (2^{n+1} - 1)/4^n t^n
    inv = ps_inv(poch_series(H, H, 2, 3))
    for n in range(4):
        assert rel(inv[n], Fraction(2 ** (n + 1) - 1, 4**n)) < 1e-70


@given(c=rationals(-2, 2), q=qs, n=st.integers(0, 8), t=rationals(-1, 1))
def test_finite_poch_series_evaluates_exactly(c, q, n, t):
    # full degree n, so evaluation is exact
    ser = poch_series(c, q, n, n)
    want = fpoch(c * t, q, n)
    got = ser.evaluate(t)
    assert abs(float(got) - float(want)) <= 1e-60 * max(1.0, abs(float(want)))


@given(c=rationals(-2, 2), q=qs)
def test_inverse_roundtrip(c, q):
    A = poch_series(c, q, INF, 10)
    one = ps_mul(A, ps_inv(A))
    assert rel(one[0], 1) < 1e-70
    assert all(abs(float(one[k])) < 1e-60 for k in range(1, 11))


def test_mutant_flag_changes_series():
    good = poch_series(H, H, INF, 4)
    bad = poch_series(H, H, INF, 4, q_sign=-1)
    assert good[2] != bad[2]
    assert good[1] == bad[1]


def test_bivariate_series():
    A, B = S(1, 2), S(3, 4)
    grid = SeriesTS.outer(A, B)
    assert grid[1, 1] == Scalar(8)
    shifted = grid.shift(1, 1)
    assert shifted[1, 1] == Scalar(3) and shifted[0, 0].is_zero()
    prod = grid * SeriesTS.from_t(S(1, -2), 1)
    assert prod[1, 0] == Scalar(0)
