"""q-shifted factorials and Gaussian binomial coefficients."""

from __future__ import annotations

from .errors import OutOfRange, TailNotReached
from .scalar import QValue, Scalar, TailConfig

__all__ = ["qpoch", "qpoch_inf", "qpoch_multi", "gauss_binom", "gauss_binom_row", "qpoch_list"]


def qpoch(a, q, n: int) -> Scalar:
    """(a; q)_n = prod_{k<n} (1 - a q^k)."""
    q = QValue.of(q)
    if n < 0:
        raise OutOfRange("qpoch is defined here for n >= 0 only")
    a = Scalar.coerce(a, q.prec)
    out = Scalar(1, max(q.prec, a.prec))
    term = a
    for _ in range(n):
        out = out * (1 - term)
        term = term * q.q
    return out


def qpoch_list(a, q, n: int) -> list[Scalar]:
    """``[(a;q)_0, ..., (a;q)_n]`` by one running product."""
    q = QValue.of(q)
    a = Scalar.coerce(a, q.prec)
    out = [Scalar(1, max(q.prec, a.prec))]
    term = a
    for _ in range(n):
        out.append(out[-1] * (1 - term))
        term = term * q.q
    return out


def qpoch_multi(params, q, n: int) -> Scalar:
    """(a_1, ..., a_m; q)_n."""
    out = Scalar(1, QValue.of(q).prec)
    for a in params:
        out = out * qpoch(a, q, n)
    return out


def qpoch_inf(a, q, tail: TailConfig | None = None) -> Scalar:
    """(a; q)_inf by a partial product with a rigorous tail bound.

    Stops at the first K with |a| |q|^K / (1 - |q|) < eps/2.  For such K the
    log of the omitted factors is bounded by
    sum_{k>=K} |a||q|^k / (1 - |a||q|^k) <= 2 |a||q|^K / (1 - |q|) once
    |a||q|^K <= 1/2, so the relative error of the result is at most eps.
    """
    q = QValue.of(q)
    a = Scalar.coerce(a, q.prec)
    prec = max(q.prec, a.prec)
    tail = tail or TailConfig.for_prec(prec)
    half_eps = tail.eps / 2
    absq = abs(q.q)
    scale = 1 / (1 - absq)
    out = Scalar(1, prec)
    if a.is_zero():
        return out
    term = a
    for _ in range(tail.max_terms):
        mag = abs(term)
        if mag <= Scalar(1, prec) / 2 and mag * scale < half_eps:
            return out
        out = out * (1 - term)
        if out.is_zero():
            return out
        term = term * q.q
    raise TailNotReached(f"(a;q)_inf: bound not met in {tail.max_terms} factors")


def gauss_binom(n: int, k: int, q) -> Scalar:
    """Gaussian binomial [n, k]_q as a telescoped product of ratios.

    [n, k] = prod_{j=1}^{k} (1 - q^{n-k+j}) / (1 - q^j); each factor is
    formed directly from powers of q, so no (q;q)_n is ever divided by another.
    """
    q = QValue.of(q)
    if k < 0 or n < 0 or k > n:
        raise OutOfRange(f"gauss_binom needs 0 <= k <= n, got n={n}, k={k}")
    k = min(k, n - k)
    out = Scalar(1, q.prec)
    qj = q.q
    qnk = q.q ** (n - k + 1)
    for _ in range(k):
        out = out * (1 - qnk) / (1 - qj)
        qj = qj * q.q
        qnk = qnk * q.q
    return out


def gauss_binom_row(n: int, q) -> list[Scalar]:
    """``[[n,0], [n,1], ..., [n,n]]`` via the ratio [n,k+1]/[n,k] = (1-q^{n-k})/(1-q^{k+1})."""
    q = QValue.of(q)
    pw = q.powers(n + 1)
    row = [Scalar(1, q.prec)]
    for k in range(n):
        row.append(row[-1] * (1 - pw[n - k]) / (1 - pw[k + 1]))
    return row
