"""Dense truncated formal power series in t, and bivariate in (t, s)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import SingularSeries
from .qcore import qpoch_list
from .scalar import DEFAULT_PREC, QValue, Scalar, zero_floor_for

__all__ = ["SeriesT", "SeriesTS", "ps_mul", "ps_inv", "poch_series", "INF"]

INF = math.inf


@dataclass(frozen=True)
class SeriesT:
    """sum_{i<=N} coeffs[i] t^i."""

    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(Scalar.coerce(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def prec(self) -> int:
        return max(c.prec for c in self.coeffs)

    @classmethod
    def constant(cls, c, order: int, prec: int = DEFAULT_PREC) -> "SeriesT":
        zero = Scalar(0, prec)
        return cls((Scalar.coerce(c, prec),) + (zero,) * order)

    @classmethod
    def monomial(cls, c, power: int, order: int, prec: int = DEFAULT_PREC) -> "SeriesT":
        zero = Scalar(0, prec)
        cs = [zero] * (order + 1)
        if power <= order:
            cs[power] = Scalar.coerce(c, prec)
        return cls(tuple(cs))

    def __getitem__(self, i: int) -> Scalar:
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, order: int) -> "SeriesT":
        if order >= self.order:
            return self
        return SeriesT(self.coeffs[: order + 1])

    def __add__(self, other: "SeriesT") -> "SeriesT":
        n = min(self.order, other.order)
        return SeriesT(tuple(self.coeffs[i] + other.coeffs[i] for i in range(n + 1)))

    def __sub__(self, other: "SeriesT") -> "SeriesT":
        n = min(self.order, other.order)
        return SeriesT(tuple(self.coeffs[i] - other.coeffs[i] for i in range(n + 1)))

    def __neg__(self):
        return SeriesT(tuple(-c for c in self.coeffs))

    def scale(self, c) -> "SeriesT":
        return SeriesT(tuple(x * c for x in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, SeriesT):
            return ps_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def shift(self, k: int) -> "SeriesT":
        """Multiply by t^k, keeping the order."""
        zero = self.coeffs[0] * 0
        cs = (zero,) * k + self.coeffs
        return SeriesT(cs[: self.order + 1])

    def evaluate(self, t) -> Scalar:
        acc = self.coeffs[-1] * 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc


def ps_mul(A: SeriesT, B: SeriesT) -> SeriesT:
    """Cauchy product truncated at min(order A, order B)."""
    n = min(A.order, B.order)
    a, b = A.coeffs, B.coeffs
    out = []
    for k in range(n + 1):
        acc = a[0] * b[k]
        for i in range(1, k + 1):
            acc = acc + a[i] * b[k - i]
        out.append(acc)
    return SeriesT(tuple(out))


def ps_inv(A: SeriesT) -> SeriesT:
    """Reciprocal series: b_0 = 1/a_0, b_k = -(sum_{i=1..k} a_i b_{k-i}) / a_0."""
    a = A.coeffs
    a0 = a[0]
    if abs(a0) < zero_floor_for(a0.prec):
        raise SingularSeries("constant term is zero (below the zero floor)")
    b = [1 / a0]
    for k in range(1, A.order + 1):
        acc = a[1] * b[k - 1]
        for i in range(2, k + 1):
            acc = acc + a[i] * b[k - i]
        b.append(-acc / a0)
    return SeriesT(tuple(b))


def poch_series(c, q, n, N: int, *, q_sign: int = 1) -> SeriesT:
    """Expansion of (c t; q)_n in t to order N; ``n`` may be ``INF``.

    Finite n: coefficients of prod_{k<n}(1 - c q^k t), built factor by factor.
    Infinite: Euler's sum_k (-1)^k q^{binom(k,2)} (c t)^k / (q;q)_k.
    ``q_sign=-1`` flips the sign of that binomial exponent; it exists only to
    build deliberately wrong series for mutation tests.
    """
    q = QValue.of(q)
    c = Scalar.coerce(c, q.prec)
    prec = max(q.prec, c.prec)
    if n == INF or n is None:
        qq = qpoch_list(q.q, q, N)
        out = []
        ck = Scalar(1, prec)
        for k in range(N + 1):
            e = k * (k - 1) // 2
            qe = q.q ** e if q_sign > 0 else 1 / q.q ** e
            sign = -1 if k % 2 else 1
            out.append(ck * qe * sign / qq[k])
            ck = ck * c
        return SeriesT(tuple(out))
    n = int(n)
    cs = [Scalar(1, prec)] + [Scalar(0, prec)] * N
    factor = c
    for _ in range(n):
        # multiply by (1 - factor t)
        for i in range(N, 0, -1):
            cs[i] = cs[i] - factor * cs[i - 1]
        factor = factor * q.q
    return SeriesT(tuple(cs))


@dataclass(frozen=True)
class SeriesTS:
    """sum_{i<=N, j<=M} coeffs[i][j] t^i s^j."""

    coeffs: tuple

    def __post_init__(self):
        rows = tuple(tuple(Scalar.coerce(c) for c in row) for row in self.coeffs)
        if not rows or len({len(r) for r in rows}) != 1 or not rows[0]:
            raise ValueError("SeriesTS coefficients must form a non-empty rectangle")
        object.__setattr__(self, "coeffs", rows)

    @property
    def orders(self) -> tuple[int, int]:
        return len(self.coeffs) - 1, len(self.coeffs[0]) - 1

    @classmethod
    def from_t(cls, A: SeriesT, M: int) -> "SeriesTS":
        zero = A.coeffs[0] * 0
        return cls(tuple((c,) + (zero,) * M for c in A.coeffs))

    @classmethod
    def from_s(cls, B: SeriesT, N: int) -> "SeriesTS":
        zero = B.coeffs[0] * 0
        first = tuple(B.coeffs)
        return cls((first,) + tuple((zero,) * len(first) for _ in range(N)))

    @classmethod
    def outer(cls, A: SeriesT, B: SeriesT) -> "SeriesTS":
        return cls(tuple(tuple(a * b for b in B.coeffs) for a in A.coeffs))

    @classmethod
    def zeros(cls, N: int, M: int, prec: int = DEFAULT_PREC) -> "SeriesTS":
        z = Scalar(0, prec)
        return cls(tuple((z,) * (M + 1) for _ in range(N + 1)))

    def __getitem__(self, ij):
        i, j = ij
        return self.coeffs[i][j]

    def __add__(self, other: "SeriesTS") -> "SeriesTS":
        N = min(self.orders[0], other.orders[0])
        M = min(self.orders[1], other.orders[1])
        return SeriesTS(tuple(tuple(self.coeffs[i][j] + other.coeffs[i][j] for j in range(M + 1))
                              for i in range(N + 1)))

    def scale(self, c) -> "SeriesTS":
        return SeriesTS(tuple(tuple(x * c for x in row) for row in self.coeffs))

    def shift(self, di: int, dj: int) -> "SeriesTS":
        """Multiply by t^di s^dj within the same orders."""
        N, M = self.orders
        zero = self.coeffs[0][0] * 0
        rows = []
        for i in range(N + 1):
            if i < di:
                rows.append((zero,) * (M + 1))
                continue
            src = self.coeffs[i - di]
            rows.append(tuple(zero if j < dj else src[j - dj] for j in range(M + 1)))
        return SeriesTS(tuple(rows))

    def __mul__(self, other):
        if not isinstance(other, SeriesTS):
            return self.scale(other)
        N = min(self.orders[0], other.orders[0])
        M = min(self.orders[1], other.orders[1])
        a, b = self.coeffs, other.coeffs
        out = []
        for i in range(N + 1):
            row = []
            for j in range(M + 1):
                acc = a[0][0] * b[i][j]
                for i1 in range(i + 1):
                    ai = a[i1]
                    bi = b[i - i1]
                    for j1 in range(j + 1):
                        if i1 == 0 and j1 == 0:
                            continue
                        acc = acc + ai[j1] * bi[j - j1]
                row.append(acc)
            out.append(tuple(row))
        return SeriesTS(tuple(out))

    __rmul__ = scale
