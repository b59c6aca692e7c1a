"""q-derivative, the operators Delta_{x,a}, Omega_{x,a}, Delta_x and their q-exponentials.

Operators act on black-box functions.  A two-variable function is called as
``f(x, a)``; a four-variable one as ``f(x, y, a, b)``.  Single applications:

    Delta_{x,a} g = x (1 - a) g(x, q a) + g(q x, a)
    Omega_{x,a} g = x g(x, a) + (1 - a) g(q x, q a)
    Delta_x     g = x g(x, a) + g(q x, a)            (a untouched)
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .errors import ZeroPoint
from .hahn import phi
from .pseries import SeriesT
from .qcore import gauss_binom_row, qpoch, qpoch_inf, qpoch_list
from .scalar import QValue, Scalar, TailConfig
from .summation import sum_tail

__all__ = [
    "FunctionHandle", "OperatorKind", "qderiv_n", "qderiv_all", "op_pow_closed", "op_pow_iter", "op_pow_iter_list",
    "apply_once", "expq_op", "expq_op_series_t", "shift_from_qderivs", "delta_pow_via_qderiv",
    "op_pow_mixed", "composed_pow_iter", "composed_expq_coeff",
]


@dataclass(frozen=True)
class FunctionHandle:
    """A pure function of (x, a) or (x, y, a, b)."""

    fn: Callable
    arity: int = 2
    name: str = "f"

    def __post_init__(self):
        if self.arity not in (2, 4):
            raise ValueError("arity must be 2 or 4")

    def __call__(self, *args):
        return self.fn(*args)


class OperatorKind(enum.Enum):
    DELTA = "Delta"
    OMEGA = "Omega"
    DELTA_PLAIN = "DeltaPlain"


class _Grid2:
    """f at (x q^i, a q^j), memoized per call."""

    def __init__(self, f, x: Scalar, a: Scalar, q: QValue):
        self.f, self.x, self.a, self.q = f, x, a, q
        self.qp = [Scalar(1, q.prec)]
        self.memo: dict = {}

    def qpow(self, k: int) -> Scalar:
        qp = self.qp
        while len(qp) <= k:
            qp.append(qp[-1] * self.q.q)
        return qp[k]

    def X(self, i):
        return self.x * self.qpow(i)

    def A(self, j):
        return self.a * self.qpow(j)

    def __call__(self, i: int, j: int) -> Scalar:
        key = (i, j)
        v = self.memo.get(key)
        if v is None:
            v = Scalar.coerce(self.f(self.X(i), self.A(j)), self.q.prec)
            self.memo[key] = v
        return v


def _coerce_point(q, *vals):
    q = QValue.of(q)
    return (q,) + tuple(Scalar.coerce(v, q.prec) for v in vals)


# ---------------------------------------------------------------- q-derivatives


def _guard_bits(n: int, x: Scalar, q: QValue) -> int:
    lx = max(0.0, -x.log2_abs())
    lq = -math.log2(1 - abs(float(q.q)))
    return 32 + int(math.ceil(n * (4 + lx + lq)))


def qderiv_all(f, x, q, n: int, a=None) -> list[Scalar]:
    """``[D^0 f(x), ..., D^n f(x)]`` with D g(x) = (g(x) - g(qx)) / x.

    Uses the triangular table over the points q^j x, j <= n.  Working
    precision is raised by guard bits to absorb the cancellation in the
    differences; results are rounded back to the input precision.
    """
    q, x = _coerce_point(q, x)
    if x.is_zero():
        raise ZeroPoint("q-derivative at x = 0")
    prec = max(q.prec, x.prec)
    wp = prec + _guard_bits(n, x, q)
    xw = x.with_prec(wp)
    qw = q.q.with_prec(wp)
    if a is None:
        g = f
    else:
        a = Scalar.coerce(a, prec)
        g = lambda X: f(X, a)
    pts = [xw]
    for _ in range(n):
        pts.append(pts[-1] * qw)
    col = [Scalar.coerce(g(p), wp).with_prec(wp) for p in pts]
    out = [col[0].with_prec(prec)]
    for _ in range(n):
        col = [(col[j] - col[j + 1]) / pts[j] for j in range(len(col) - 1)]
        out.append(col[0].with_prec(prec))
    return out


def qderiv_n(f, x, q, n: int, a=None) -> Scalar:
    """n-th q-derivative of f at x; with ``a`` given, f is called as f(x, a)."""
    return qderiv_all(f, x, q, n, a)[n]


def shift_from_qderivs(f, x, q, n: int, a=None) -> Scalar:
    """Rebuild f(q^n x) = sum_k [n,k] (-1)^k q^binom(k,2) x^k D^k f(x)."""
    q, x = _coerce_point(q, x)
    ds = qderiv_all(f, x, q, n, a)
    row = gauss_binom_row(n, q)
    total = Scalar(0, q.prec)
    for k in range(n + 1):
        sign = -1 if k % 2 else 1
        total = total + sign * row[k] * q.q ** (k * (k - 1) // 2) * x ** k * ds[k]
    return total


# ---------------------------------------------------------------- powers


def _closed_from_grid(kind: OperatorKind, n: int, g: _Grid2) -> Scalar:
    q = g.q
    row = gauss_binom_row(n, q)
    x = g.x
    total = Scalar(0, q.prec)
    if kind is OperatorKind.DELTA_PLAIN:
        for k in range(n + 1):
            total = total + row[k] * x ** k * g(n - k, 0)
        return total
    ak = qpoch_list(g.a, q, n)
    for k in range(n + 1):
        if kind is OperatorKind.DELTA:
            total = total + row[k] * ak[k] * x ** k * g(n - k, k)
        else:
            total = total + row[k] * ak[k] * x ** (n - k) * g(k, k)
    return total


def op_pow_closed(kind: OperatorKind, n: int, f, x, a, q) -> Scalar:
    """n-th power of the operator applied to f at (x, a), from the finite expansions

        Delta^n = sum_k [n,k] (a;q)_k x^k eta_a^k eta_x^(n-k)
        Omega^n = sum_k [n,k] (a;q)_k x^(n-k) eta_a^k eta_x^k
    """
    q, x, a = _coerce_point(q, x, a)
    return _closed_from_grid(kind, n, _Grid2(f, x, a, q))


def apply_once(kind: OperatorKind, g: Callable[[int, int], Scalar], i: int, j: int,
               X: Scalar, A: Scalar) -> Scalar:
    """One application at grid point (i, j) with coordinates (X, A)."""
    if kind is OperatorKind.DELTA:
        return X * (1 - A) * g(i, j + 1) + g(i + 1, j)
    if kind is OperatorKind.OMEGA:
        return X * g(i, j) + (1 - A) * g(i + 1, j + 1)
    return X * g(i, j) + g(i + 1, j)


def op_pow_iter(kind: OperatorKind, n: int, f, x, a, q) -> Scalar:
    """n-fold application of the single-step operator (independent of the closed forms)."""
    q, x, a = _coerce_point(q, x, a)
    base = _Grid2(f, x, a, q)
    levels: list[dict] = [None] * (n + 1)

    def val(m, i, j):
        if m == 0:
            return base(i, j)
        memo = levels[m]
        if memo is None:
            memo = levels[m] = {}
        key = (i, j)
        v = memo.get(key)
        if v is None:
            v = apply_once(kind, lambda ii, jj: val(m - 1, ii, jj), i, j, base.X(i), base.A(j))
            memo[key] = v
        return v

    return val(n, 0, 0)


def op_pow_iter_list(kind: OperatorKind, n: int, f, x, a, q) -> list[Scalar]:
    """``[T^m f for m in 0..n]`` by iteration, sharing one table across levels."""
    q, x, a = _coerce_point(q, x, a)
    base = _Grid2(f, x, a, q)
    # level m is needed on the square max(i, j) <= n - m; Delta_x never shifts a
    js = (lambda k: range(1)) if kind is OperatorKind.DELTA_PLAIN else (lambda k: range(k + 1))
    prev = {(i, j): base(i, j) for i in range(n + 1) for j in js(n)}
    out = [prev[0, 0]]
    for m in range(1, n + 1):
        cur = {}
        g = prev.__getitem__
        for i in range(n - m + 1):
            for j in js(n - m):
                cur[i, j] = apply_once(kind, lambda ii, jj: g((ii, jj)), i, j, base.X(i), base.A(j))
        out.append(cur[0, 0])
        prev = cur
    return out


# ---------------------------------------------------------------- q-exponentials


def expq_op(kind: OperatorKind, t, f, x, a, q, mode: str = "closed",
            tail: TailConfig | None = None) -> Scalar:
    """exp_q(t T) f at (x, a) for T in {Delta_{x,a}, Omega_{x,a}, Delta_x}, f a function of x.

    mode ``closed``: (a x t;q)_inf/(x t;q)_inf sum t^n/(q;q)_n f(q^n x) for Delta,
        1/(x t;q)_inf sum (a;q)_n t^n/(q;q)_n f(q^n x) for Omega,
        1/(x t;q)_inf sum t^n/(q;q)_n f(q^n x) for Delta_x.
    mode ``series``: sum t^n/(q;q)_n T^n f directly.
    mode ``qderiv``: the expansions in D_x^n f(x) (Delta_x is Delta at a = 0).
    """
    q, t, x, a = _coerce_point(q, t, x, a)
    tail = tail or TailConfig.for_prec(q.prec)
    inner = tail.tighter(8)
    if kind is OperatorKind.DELTA_PLAIN:
        a_eff = Scalar(0, q.prec)
    else:
        a_eff = a
    if t.is_zero():
        return Scalar.coerce(f(x, a), q.prec)

    if mode == "closed":
        def terms():
            c = Scalar(1, q.prec)
            xn = x
            n = 0
            while True:
                yield c * f(xn, a)
                factor = t / (1 - q.q ** (n + 1))
                if kind is OperatorKind.OMEGA:
                    factor = factor * (1 - a * q.q ** n)
                c = c * factor
                xn = xn * q.q
                n += 1

        s = sum_tail(terms(), inner, "exp_q closed form")
        pre = 1 / qpoch_inf(x * t, q, inner)
        if kind is OperatorKind.DELTA:
            pre = pre * qpoch_inf(a * x * t, q, inner)
        return pre * s

    if mode == "series":
        g = _Grid2(f, x, a, q)

        def terms():
            c = Scalar(1, q.prec)
            n = 0
            while True:
                yield c * _closed_from_grid(kind, n, g)
                n += 1
                c = c * t / (1 - q.q ** n)

        return sum_tail(terms(), inner, "exp_q power series")

    if mode == "qderiv":
        return _expq_qderiv(kind, t, f, x, a_eff, a, q, inner)

    raise ValueError(f"unknown mode {mode!r}")


def _expq_qderiv(kind, t, f, x, a_eff, a, q, tail):
    # the D^n f values depend on the table size only through guard bits; grow in chunks
    chunk = 24
    while True:
        ds = qderiv_all(f, x, q, chunk, a)

        def terms():
            c = Scalar(1, q.prec)  # (-x t)^n q^binom(n,2) / (q;q)_n [* (a)_n/(at)_n]
            for n in range(chunk + 1):
                yield c * ds[n]
                factor = -x * t * q.q ** n / (1 - q.q ** (n + 1))
                if kind is OperatorKind.OMEGA:
                    factor = factor * (1 - a * q.q ** n) / (1 - a * t * q.q ** n)
                c = c * factor

        try:
            s = sum_tail(_strict(terms(), chunk), tail, "exp_q q-derivative form")
            break
        except _Exhausted:
            chunk *= 2
            if chunk > tail.max_terms:
                from .errors import TailNotReached
                raise TailNotReached("q-derivative expansion did not converge")
    den = qpoch_inf(t, q, tail) * qpoch_inf(x * t, q, tail)
    if kind is OperatorKind.OMEGA:
        num = qpoch_inf(a * t, q, tail)
    else:
        num = qpoch_inf(a_eff * x * t, q, tail)
    return num / den * s


class _Exhausted(Exception):
    pass


def _strict(it, n):
    """Yield from a finite iterator; raise if it runs out (the tail was not reached)."""
    count = 0
    for v in it:
        count += 1
        yield v
    raise _Exhausted


def expq_op_series_t(kind: OperatorKind, f, x, a, q, N: int) -> SeriesT:
    """exp_q(t T) f as a series in t: coefficient n is T^n f / (q;q)_n."""
    q, x, a = _coerce_point(q, x, a)
    g = _Grid2(f, x, a, q)
    qq = qpoch_list(q.q, q, N)
    return SeriesT(tuple(_closed_from_grid(kind, n, g) / qq[n] for n in range(N + 1)))


# ---------------------------------------------------------------- expansions in q-derivatives


def delta_pow_via_qderiv(n: int, f, x, a, q) -> Scalar:
    """Delta_{x,a}^n f(x) = sum_k [n,k] (-x)^k q^binom(k,2) phi(n-k, a, x, 1) D^k f(x), f univariate."""
    q, x, a = _coerce_point(q, x, a)
    ds = qderiv_all(lambda X: f(X, a), x, q, n)
    row = gauss_binom_row(n, q)
    total = Scalar(0, q.prec)
    for k in range(n + 1):
        total = total + row[k] * (-x) ** k * q.q ** (k * (k - 1) // 2) * phi(n - k, a, x, 1, q) * ds[k]
    return total


def op_pow_mixed(kind: OperatorKind, n: int, f, x, a, q, q_exponent: str = "k") -> Scalar:
    """Expansion of Delta^n f(x, a) or Omega^n f(x, a) in eta_a-shifted q-derivatives.

    Delta^n f = sum_k [n,k] (-1)^k q^binom(k,2) x^k sum_j [n-k,j] (a;q)_j x^j (D_x^k f)(x, a q^j)
    Omega^n f = sum_k [n,k] (-1)^k q^binom(k,2) x^k (a;q)_k
                  sum_j [n-k,j] (a q^k;q)_j x^(n-k-j) (D_x^k f)(x, a q^(j+k))

    ``q_exponent="j"`` places binom(j,2) on the inner index of the Omega sum
    instead; that reading is kept only so tests can show it is false.
    """
    q, x, a = _coerce_point(q, x, a)
    row = gauss_binom_row(n, q)
    dcache: dict = {}

    def D(k, shift):
        key = shift
        if key not in dcache:
            dcache[key] = qderiv_all(f, x, q, n, a * q.q ** shift)
        return dcache[key][k]

    total = Scalar(0, q.prec)
    for k in range(n + 1):
        sign = -1 if k % 2 else 1
        qk2 = q.q ** (k * (k - 1) // 2)
        inner_row = gauss_binom_row(n - k, q)
        inner = Scalar(0, q.prec)
        if kind is OperatorKind.DELTA:
            aj = qpoch_list(a, q, n - k)
            for j in range(n - k + 1):
                inner = inner + inner_row[j] * aj[j] * x ** j * D(k, j)
            total = total + row[k] * sign * qk2 * x ** k * inner
        elif kind is OperatorKind.OMEGA:
            ak = qpoch(a, q, k)
            aqj = qpoch_list(a * q.q ** k, q, n - k)
            for j in range(n - k + 1):
                term = inner_row[j] * aqj[j] * x ** (n - k - j) * D(k, j + k)
                if q_exponent == "j":
                    term = term * q.q ** (j * (j - 1) // 2)
                inner = inner + term
            outer_q = qk2 if q_exponent == "k" else Scalar(1, q.prec)
            total = total + row[k] * sign * outer_q * x ** k * ak * inner
        else:
            raise ValueError("op_pow_mixed covers Delta and Omega")
    return total


# ---------------------------------------------------------------- composed operators (four variables)


def composed_pow_iter(kind: OperatorKind, n: int, f, x, y, a, b, q, first: str = "x") -> list[Scalar]:
    """``[(T_{y,b} T_{x,a})^m f for m = 0..n]`` by alternating single applications.

    ``first`` selects which factor is applied first in each round; the two
    factors act on disjoint variables, so both orders must agree.
    """
    q, x, y, a, b = _coerce_point(q, x, y, a, b)
    qp = [Scalar(1, q.prec)]

    def qpow(k):
        while len(qp) <= k:
            qp.append(qp[-1] * q.q)
        return qp[k]

    base: dict = {}

    def f_at(i, k, j, l):
        key = (i, k, j, l)
        v = base.get(key)
        if v is None:
            v = Scalar.coerce(f(x * qpow(i), y * qpow(k), a * qpow(j), b * qpow(l)), q.prec)
            base[key] = v
        return v

    order = ("x", "y") if first == "x" else ("y", "x")
    memo: dict = {}

    def val(m, i, k, j, l):
        if m == 0:
            return f_at(i, k, j, l)
        key = (m, i, k, j, l)
        v = memo.get(key)
        if v is not None:
            return v
        # m counts applications from the inside; m = 1 is applied first
        if order[(m - 1) % 2] == "x":
            g = lambda ii, jj: val(m - 1, ii, k, jj, l)
            v = apply_once(kind, g, i, j, x * qpow(i), a * qpow(j))
        else:
            g = lambda kk, ll: val(m - 1, i, kk, j, ll)
            v = apply_once(kind, g, k, l, y * qpow(k), b * qpow(l))
        memo[key] = v
        return v

    out = []
    for m in range(2 * n + 1):
        v = val(m, 0, 0, 0, 0)
        if m % 2 == 0:
            out.append(v)
    return out


def composed_expq_coeff(kind: OperatorKind, d: int, f, x, y, a, b, q, unshifted: bool = False) -> Scalar:
    """Coefficient of t^d in exp_q(t T_{y,b} T_{x,a}) f from the quadruple-sum expansion.

    Delta:  sum (a;q)_{s+k} (b;q)_{s+l} x^{s+k} y^{s+l} q^{kl} / ((q;q)_s (q;q)_k (q;q)_l (q;q)_n)
                f(x q^{n+l}, y q^{n+k}, a q^{s+k}, b q^{s+l})
    Omega:  sum (a;q)_{s+k} (b;q)_{s+l} x^{l+n} y^{k+n} q^{sn} / (...)
                f(x q^{s+k}, y q^{s+l}, a q^{s+k}, b q^{s+l})
    over s + k + l + n = d.  ``unshifted=True`` drops s from the shifts (a q^k for
    Delta; x q^k, a q^k for Omega); that variant is wrong for general f and
    exists for negative tests.
    """
    q, x, y, a, b = _coerce_point(q, x, y, a, b)
    qq = qpoch_list(q.q, q, d)
    pa = qpoch_list(a, q, d)
    pb = qpoch_list(b, q, d)
    qp = q.powers(2 * d + d * d)
    total = Scalar(0, q.prec)
    for s in range(d + 1):
        for k in range(d + 1 - s):
            for l in range(d + 1 - s - k):
                n = d - s - k - l
                c = pa[s + k] * pb[s + l] / (qq[s] * qq[k] * qq[l] * qq[n])
                if kind is OperatorKind.DELTA:
                    c = c * x ** (s + k) * y ** (s + l) * qp[k * l]
                    ashift = k if unshifted else s + k
                    val = f(x * qp[n + l], y * qp[n + k], a * qp[ashift], b * qp[s + l])
                else:
                    c = c * x ** (l + n) * y ** (k + n) * qp[s * n]
                    xs = k if unshifted else s + k
                    val = f(x * qp[xs], y * qp[s + l], a * qp[xs], b * qp[s + l])
                total = total + c * val
    return total
