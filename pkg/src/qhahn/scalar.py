"""Arbitrary-precision real scalars with explicit precision.

Every ``Scalar`` carries its own precision in bits.  Binary operations run in
a gmpy2 context at the larger of the two precisions; nothing reads a global
precision setting.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import gmpy2

from .errors import DomainError

DEFAULT_PREC = 256


@functools.lru_cache(maxsize=None)
def context(prec: int) -> gmpy2.context:
    return gmpy2.context(precision=prec, round=gmpy2.RoundToNearest)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer, or a decimal (``"0.25"``, ``"1e-25"``) exactly."""
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def _raw(value, prec: int) -> gmpy2.mpfr:
    ctx = context(prec)
    if isinstance(value, Scalar):
        return ctx.plus(value.v)
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, int):
        return gmpy2.mpfr(gmpy2.mpz(value), prec)
    if isinstance(value, (Fraction, Rational)):
        return ctx.div(gmpy2.mpz(value.numerator), gmpy2.mpz(value.denominator))
    if isinstance(value, float):
        return ctx.plus(gmpy2.mpfr(value, 53))
    if isinstance(value, str):
        return _raw(parse_rational(value), prec)
    if isinstance(value, type(gmpy2.mpfr(0))):
        return ctx.plus(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Scalar")


class Scalar:
    """Immutable real number with an explicit working precision."""

    __slots__ = ("v", "prec")

    def __init__(self, value=0, prec: int = DEFAULT_PREC):
        if prec < 2:
            raise ValueError("precision must be at least 2 bits")
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "v", _raw(value, prec))

    @classmethod
    def _wrap(cls, v, prec: int) -> "Scalar":
        out = object.__new__(cls)
        object.__setattr__(out, "v", v)
        object.__setattr__(out, "prec", prec)
        return out

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def __reduce__(self):
        return Scalar._wrap, (self.v, self.prec)

    @staticmethod
    def coerce(value, prec: int = DEFAULT_PREC) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        return Scalar(value, prec)

    def with_prec(self, prec: int) -> "Scalar":
        return Scalar._wrap(context(prec).plus(self.v), prec)

    # arithmetic ---------------------------------------------------------

    def _other(self, other):
        if isinstance(other, Scalar):
            return other.v, max(self.prec, other.prec)
        if isinstance(other, int):
            return gmpy2.mpz(other), self.prec
        return _raw(other, self.prec), self.prec

    def __add__(self, other):
        try:
            o, p = self._other(other)
        except TypeError:
            return NotImplemented
        return Scalar._wrap(context(p).add(self.v, o), p)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o, p = self._other(other)
        except TypeError:
            return NotImplemented
        return Scalar._wrap(context(p).sub(self.v, o), p)

    def __rsub__(self, other):
        try:
            o, p = self._other(other)
        except TypeError:
            return NotImplemented
        return Scalar._wrap(context(p).sub(o, self.v), p)

    def __mul__(self, other):
        try:
            o, p = self._other(other)
        except TypeError:
            return NotImplemented
        return Scalar._wrap(context(p).mul(self.v, o), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o, p = self._other(other)
        except TypeError:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError("Scalar division by zero")
        return Scalar._wrap(context(p).div(self.v, o), p)

    def __rtruediv__(self, other):
        try:
            o, p = self._other(other)
        except TypeError:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError("Scalar division by zero")
        return Scalar._wrap(context(p).div(o, self.v), p)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / (self ** (-n))
        return Scalar._wrap(context(self.prec).pow(self.v, gmpy2.mpz(n)), self.prec)

    def __neg__(self):
        return Scalar._wrap(context(self.prec).minus(self.v), self.prec)

    def __pos__(self):
        return self

    def __abs__(self):
        return Scalar._wrap(context(self.prec).abs(self.v), self.prec)

    # comparison -----------------------------------------------------------

    def _cmp_value(self, other):
        if isinstance(other, Scalar):
            return other.v
        if isinstance(other, int):
            return gmpy2.mpz(other)
        if isinstance(other, Fraction):
            return gmpy2.mpq(other.numerator, other.denominator)
        return _raw(other, self.prec)

    def __eq__(self, other):
        try:
            return self.v == self._cmp_value(other)
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return self.v < self._cmp_value(other)

    def __le__(self, other):
        return self.v <= self._cmp_value(other)

    def __gt__(self, other):
        return self.v > self._cmp_value(other)

    def __ge__(self, other):
        return self.v >= self._cmp_value(other)

    def __hash__(self):
        return hash((self.v, self.prec))

    def __bool__(self):
        return bool(self.v != 0)

    def __float__(self):
        return float(self.v)

    def is_zero(self) -> bool:
        return self.v == 0

    def log2_abs(self) -> float:
        """log2 |self| as a float (``-inf`` for zero); cheap magnitude probe."""
        if self.v == 0:
            return float("-inf")
        e, m = gmpy2.frexp(self.v)
        return e + math.log2(abs(float(m)))

    # formatting -----------------------------------------------------------

    def to_decimal(self, digits: int = 30) -> str:
        """Fixed-point decimal rounded to ``digits`` fractional digits, trailing zeros trimmed."""
        q = Fraction(int(gmpy2.mpq(self.v).numerator), int(gmpy2.mpq(self.v).denominator))
        scaled = q * 10**digits
        n = round(scaled)
        sign = "-" if n < 0 else ""
        s = str(abs(n)).rjust(digits + 1, "0")
        whole, frac = s[:-digits] if digits else s, s[-digits:] if digits else ""
        frac = frac.rstrip("0")
        if whole == "0" and not frac:
            sign = ""
        return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"

    def to_sci(self, digits: int = 6) -> str:
        """Scientific notation with ``digits`` significant digits, e.g. ``3.14159e-31``."""
        if self.v == 0:
            return "0"
        mant, exp, _ = self.v.digits(10, digits)
        sign = ""
        if mant.startswith("-"):
            sign, mant = "-", mant[1:]
        return f"{sign}{mant[0]}.{mant[1:]}e{exp - 1:+03d}"

    def __repr__(self):
        return f"Scalar({self.to_sci(20)}, prec={self.prec})"

    __str__ = lambda self: self.to_sci(20)


def scalar(value, prec: int = DEFAULT_PREC) -> Scalar:
    return Scalar.coerce(value, prec)


def zero_floor_for(prec: int) -> Scalar:
    """Magnitudes below 2^(-prec/2) are treated as structural zeros."""
    return Scalar._wrap(context(prec).mul_2exp(gmpy2.mpfr(1), -(prec // 2)), prec)


@dataclass(frozen=True)
class QValue:
    """The base ``q`` with ``0 < |q| < 1``."""

    q: Scalar

    def __post_init__(self):
        if not isinstance(self.q, Scalar):
            object.__setattr__(self, "q", Scalar(self.q))
        if self.q.is_zero() or abs(self.q) >= 1:
            raise DomainError(f"q must satisfy 0 < |q| < 1, got {self.q}")

    @classmethod
    def of(cls, q, prec: int = DEFAULT_PREC) -> "QValue":
        if isinstance(q, QValue):
            return q
        return cls(Scalar.coerce(q, prec))

    @property
    def prec(self) -> int:
        return self.q.prec

    def powers(self, n: int) -> list[Scalar]:
        """``[q^0, q^1, ..., q^n]``."""
        out = [Scalar(1, self.prec)]
        for _ in range(n):
            out.append(out[-1] * self.q)
        return out


@dataclass(frozen=True)
class TailConfig:
    """Truncation control for infinite sums and products.

    ``eps`` is a relative target: summation stops once the estimated tail is
    at most ``eps`` times the magnitude of the running total.
    """

    eps: Scalar
    max_terms: int = 10000

    def __post_init__(self):
        if not isinstance(self.eps, Scalar):
            object.__setattr__(self, "eps", Scalar(self.eps))
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")

    @classmethod
    def for_prec(cls, prec: int = DEFAULT_PREC, max_terms: int = 10000) -> "TailConfig":
        # about prec/2 + 12 bits: leaves headroom above 1e-25 tolerances at 256 bits
        eps = Scalar._wrap(context(prec).mul_2exp(gmpy2.mpfr(1), -(prec // 2 + 12)), prec)
        return cls(eps, max_terms)

    def tighter(self, bits: int) -> "TailConfig":
        return TailConfig(self.eps / (2**bits), self.max_terms)
