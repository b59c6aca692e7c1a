"""Homogeneous Hahn (Al-Salam-Carlitz) polynomials and relatives.

    phi(n, a, x, y)          = sum_k [n,k] (a;q)_k x^k y^(n-k)
    phi2(n, al, be, u, v)    = sum_k [n,k] (al;q)_k (be;q)_(n-k) u^k v^(n-k)
    psi(n, a, x)             = sum_r (-1)^r [n,r] q^(binom(r+1,2) - n r) (1/a;q)_r (a x)^r
"""

from __future__ import annotations

from .errors import ZeroParameter
from .qcore import gauss_binom_row, qpoch, qpoch_list
from .scalar import QValue, Scalar

__all__ = ["phi", "phi2", "psi", "phi_qderiv", "phi_list"]


def phi(n: int, a, x, y, q) -> Scalar:
    """Homogeneous Hahn polynomial; ``phi(n, a, x, 1, q)`` is the classical one."""
    q = QValue.of(q)
    a, x, y = (Scalar.coerce(v, q.prec) for v in (a, x, y))
    row = gauss_binom_row(n, q)
    total = Scalar(0, q.prec)
    ak = Scalar(1, q.prec)  # (a;q)_k
    aqk = a
    for k in range(n + 1):
        total = total + row[k] * ak * x ** k * y ** (n - k)
        ak = ak * (1 - aqk)
        aqk = aqk * q.q
    return total


def phi_list(nmax: int, a, x, y, q) -> list[Scalar]:
    """``[phi(0..nmax)]``; convenience for generating-function checks."""
    return [phi(n, a, x, y, q) for n in range(nmax + 1)]


def phi2(n: int, alpha, beta, u, v, q) -> Scalar:
    """Two-parameter homogeneous Hahn polynomial."""
    q = QValue.of(q)
    u, v = Scalar.coerce(u, q.prec), Scalar.coerce(v, q.prec)
    row = gauss_binom_row(n, q)
    al = qpoch_list(alpha, q, n)
    be = qpoch_list(beta, q, n)
    total = Scalar(0, q.prec)
    for k in range(n + 1):
        total = total + row[k] * al[k] * be[n - k] * u ** k * v ** (n - k)
    return total


def psi(n: int, a, x, q) -> Scalar:
    """Al-Salam-Carlitz psi_n^{(a)}(x).

    Uses (1/a;q)_r a^r = prod_{j<r} (a - q^j), which has no division by a;
    a = 0 is still rejected because the defining formula needs 1/a.
    """
    q = QValue.of(q)
    a, x = Scalar.coerce(a, q.prec), Scalar.coerce(x, q.prec)
    if a.is_zero():
        raise ZeroParameter("psi_n^{(a)} is defined for a != 0")
    row = gauss_binom_row(n, q)
    total = Scalar(0, q.prec)
    prod = Scalar(1, q.prec)  # prod_{j<r}(a - q^j)
    qj = Scalar(1, q.prec)
    for r in range(n + 1):
        e = r * (r + 1) // 2 - n * r
        qe = q.q ** e if e >= 0 else 1 / q.q ** (-e)
        sign = -1 if r % 2 else 1
        total = total + sign * row[r] * qe * prod * x ** r
        prod = prod * (a - qj)
        qj = qj * q.q
    return total


def phi_qderiv(m: int, a, x, q, k: int) -> Scalar:
    """k-th q-derivative in x of phi(m, a, x, 1):

        (a;q)_k (q;q)_m / (q;q)_(m-k) * phi(m-k, a q^k, x, 1).
    """
    q = QValue.of(q)
    if k > m:
        return Scalar(0, q.prec)
    a = Scalar.coerce(a, q.prec)
    ratio = Scalar(1, q.prec)
    qi = q.q ** (m - k + 1)
    for _ in range(k):  # (q;q)_m / (q;q)_{m-k}
        ratio = ratio * (1 - qi)
        qi = qi * q.q
    return qpoch(a, q, k) * ratio * phi(m - k, a * q.q ** k, x, 1, q)
