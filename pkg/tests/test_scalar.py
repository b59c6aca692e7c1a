from fractions import Fraction

import pytest

from qhahn.scalar import QValue, Scalar, TailConfig, parse_rational


def test_precision_survives_negation_and_abs():
    x = Scalar(Fraction(1, 3))
    assert (-x).prec == 256
    assert (x + (-x)).is_zero()
    third = -(-x)
    assert abs(third - x).is_zero()
    assert abs(-x) == x


def test_integer_scalars_format():
    assert Scalar(3).to_decimal(5) == "3"
    assert Scalar(Fraction(3, 8)).to_decimal(30) == "0.375"
    assert Scalar(-2).to_sci(3) == "-2.00e+00"


def test_parse_rational_forms():
    assert parse_rational("3/8") == Fraction(3, 8)
    assert parse_rational("0.25") == Fraction(1, 4)
    assert parse_rational("1e-25") == Fraction(1, 10**25)
    with pytest.raises(ValueError):
        parse_rational("x")


def test_log2_abs():
    assert Scalar(Fraction(3, 16)).log2_abs() == pytest.approx(-2.415, abs=1e-3)
    assert Scalar(8).log2_abs() == pytest.approx(3)


def test_tail_config_is_relative_and_validated():
    t = TailConfig.for_prec(256)
    assert t.eps.log2_abs() == pytest.approx(-140)
    assert t.tighter(8).eps.log2_abs() == pytest.approx(-148)
    with pytest.raises(ValueError):
        TailConfig(Scalar(0))


def test_qvalue_powers():
    q = QValue(Scalar(Fraction(1, 2)))
    assert q.powers(3)[3] == Scalar(Fraction(1, 8))


def test_pickle_round_trip():
    import pickle
    x = Scalar(Fraction(1, 3), 300)
    y = pickle.loads(pickle.dumps(x))
    assert y.prec == 300 and y == x
