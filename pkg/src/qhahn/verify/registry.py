"""The identity registry.

Every entry samples rational parameters, builds both sides with independent
code paths, and hands the pairs to the harness.  Statements are written in
plain text next to each builder; where an entry deviates from the most
literal reading of a statement, the docstring says which form is checked.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from ..hahn import phi, phi_list, psi
from ..hyper import PhiSpec, ThetaSpec, rphis, theta_double
from ..pseries import INF, SeriesT, SeriesTS, poch_series, ps_inv
from ..qcore import gauss_binom_row, qpoch, qpoch_inf, qpoch_list
from ..qoperators import (OperatorKind, composed_expq_coeff, composed_pow_iter, delta_pow_via_qderiv,
                          expq_op, expq_op_series_t, op_pow_iter_list, op_pow_mixed, qderiv_all)
from ..scalar import QValue, Scalar
from ..summation import sum_indexed, sum_tail
from .functions import BIVARIATE, FOUR_VARIABLE, UNIVARIATE
from .harness import Identity, P

__all__ = ["REGISTRY", "get_identity", "MUTANTS", "ids"]

DELTA, OMEGA, PLAIN = OperatorKind.DELTA, OperatorKind.OMEGA, OperatorKind.DELTA_PLAIN
H = Fraction(1, 2)
S = Fraction(7, 8)


def _abs(v) -> Fraction:
    return abs(Fraction(v))


def _max_abs(*vs) -> Fraction:
    return max(abs(Fraction(v)) for v in vs)


# ---------------------------------------------------------------- shared pieces


def pinf(c, q, tail):
    return qpoch_inf(c, q, tail)


def einf(c, q, N, sign=1) -> SeriesT:
    """(c t; q)_inf as a series in t."""
    return poch_series(c, q, INF, N, q_sign=sign)


def inv_einf(c, q, N, sign=1) -> SeriesT:
    """1 / (c t; q)_inf as a series in t."""
    return ps_inv(einf(c, q, N, sign))


def shifted_values_series(f, x, a, q, N, weights=None) -> SeriesT:
    """sum_n w_n f(q^n x, a) t^n / (q;q)_n, with w_n = 1 unless given."""
    qq = qpoch_list(q.q, q, N)
    out = []
    xn = x
    for n in range(N + 1):
        c = Scalar.coerce(f(xn, a), q.prec) / qq[n]
        if weights is not None:
            c = c * weights[n]
        out.append(c)
        xn = xn * q.q
    return SeriesT(tuple(out))


def iter_series(kind, f, x, a, q, N) -> SeriesT:
    """T^n f / (q;q)_n from the iterated single-step operator."""
    qq = qpoch_list(q.q, q, N)
    vals = op_pow_iter_list(kind, N, f, x, a, q)
    return SeriesT(tuple(v / qq[n] for n, v in enumerate(vals)))


class Lazy:
    """Memoized sequence ``fn(0), fn(1), ...``."""

    def __init__(self, fn: Callable[[int], Scalar]):
        self.fn = fn
        self.vals: list = []

    def __getitem__(self, n: int) -> Scalar:
        while len(self.vals) <= n:
            self.vals.append(self.fn(len(self.vals)))
        return self.vals[n]


def inv_qq(q) -> Lazy:
    """1 / (q;q)_n."""
    state = {"qq": Scalar(1, q.prec), "qn": Scalar(1, q.prec)}

    def nxt(n):
        if n:
            state["qn"] = state["qn"] * q.q
            state["qq"] = state["qq"] * (1 - state["qn"])
        return 1 / state["qq"]

    return Lazy(nxt)


# ---------------------------------------------------------------- baselines


def b_qbinomial(p, env):
    lhs = rphis(PhiSpec((p.a,), (), p.q, p.z), env.tail)
    rhs = pinf(p.a * p.z, p.q, env.tail) / pinf(p.z, p.q, env.tail)
    return [(lhs, rhs)]


def b_euler(p, env):
    q, z = p.q, p.z
    exp_sum = sum_tail(_geom_terms(z, q, False), env.tail, "Euler sum")
    alt_sum = sum_tail(_geom_terms(z, q, True), env.tail, "Euler sum")
    zinf = pinf(z, q, env.tail)
    return [(exp_sum, 1 / zinf), (alt_sum, zinf)]


def _geom_terms(z, q, alternating):
    term = Scalar(1, q.prec)
    qn = Scalar(1, q.prec)
    while True:
        yield term
        factor = z / (1 - qn * q.q)
        if alternating:
            factor = -factor * qn
        term = term * factor
        qn = qn * q.q


def b_jackson(p, env):
    q, a, b, c, z = p.q, p.a, p.b, p.c, p.z
    lhs = rphis(PhiSpec((a, b), (c,), q, z), env.tail)
    rhs = pinf(a * z, q, env.tail) / pinf(z, q, env.tail) * rphis(PhiSpec((a, c / b), (c, a * z), q, b * z), env.tail)
    return [(lhs, rhs)]


def b_qgauss(p, env):
    q, a, b, c = p.q, p.a, p.b, p.c
    lhs = rphis(PhiSpec((a, b), (c,), q, c / (a * b)), env.tail)
    rhs = (pinf(c / a, q, env.tail) * pinf(c / b, q, env.tail)
           / (pinf(c, q, env.tail) * pinf(c / (a * b), q, env.tail)))
    return [(lhs, rhs)]


# ---------------------------------------------------------------- operator exponentials


def b_liu_plain(p, env):
    """exp_q(t Delta_x) f = 1/(xt;q)_inf sum t^n f(q^n x)/(q;q)_n, f univariate."""
    q, x, N = p.q, p.x, env.order
    zero = Scalar(0, q.prec)
    out = []
    for f in UNIVARIATE.values():
        lhs = iter_series(PLAIN, f, x, zero, q, N)
        rhs = inv_einf(x, q, N) * shifted_values_series(f, x, zero, q, N)
        out.append((lhs, rhs))
    return out


def b_expq_delta(p, env):
    """exp_q(t Delta_{x,a}) f = (axt;q)_inf/(xt;q)_inf sum t^n f(q^n x)/(q;q)_n."""
    q, x, a, N = p.q, p.x, p.a, env.order
    out = []
    for f in UNIVARIATE.values():
        lhs = iter_series(DELTA, f, x, a, q, N)
        rhs = einf(a * x, q, N) * inv_einf(x, q, N) * shifted_values_series(f, x, a, q, N)
        out.append((lhs, rhs))
    return out


def b_expq_omega(p, env):
    """exp_q(t Omega_{x,a}) f = 1/(xt;q)_inf sum (a;q)_n t^n f(q^n x)/(q;q)_n."""
    q, x, a, N = p.q, p.x, p.a, env.order
    aw = qpoch_list(a, q, N)
    out = []
    for f in UNIVARIATE.values():
        lhs = iter_series(OMEGA, f, x, a, q, N)
        rhs = inv_einf(x, q, N) * shifted_values_series(f, x, a, q, N, aw)
        out.append((lhs, rhs))
    return out


def b_expq_one(p, env):
    """exp_q(t Delta_{x,a}) 1 = (axt;q)_inf/(t,xt;q)_inf and exp_q(t Omega_{x,a}) 1 = (at;q)_inf/(t,xt;q)_inf."""
    q, x, a, N = p.q, p.x, p.a, env.order
    one = lambda X, A: 1
    base = inv_einf(1, q, N) * inv_einf(x, q, N)
    return [(expq_op_series_t(DELTA, one, x, a, q, N), einf(a * x, q, N) * base),
            (expq_op_series_t(OMEGA, one, x, a, q, N), einf(a, q, N) * base)]


def _phi11_series_ts(c_k, lower_series, N, in_t: bool) -> SeriesTS:
    """sum_k c_k t^k s^k L_k, where L_k is a series in t (``in_t``) or in s."""
    total = SeriesTS.zeros(N, N, lower_series(0).prec)
    for k in range(N + 1):
        L = lower_series(k).scale(c_k[k])
        grid = SeriesTS.from_t(L, N) if in_t else SeriesTS.from_s(L, N)
        total = total + grid.shift(k, k)
    return total


def b_double_delta(p, env):
    """exp_q(s Delta_{x,b}) exp_q(t Delta_{x,a}) 1
    = (axt,bxs;q)_inf/(t,s,xt,xs;q)_inf 1phi1(a; axt; q, xts)."""
    q, x, a, b, N = p.q, p.x, p.a, p.b, env.order
    qq = qpoch_list(q.q, q, N)
    rows = []
    for n in range(N + 1):
        g = lambda X, B, n=n: phi(n, a, X, 1, q)
        vals = op_pow_iter_list(DELTA, N, g, x, b, q)
        rows.append(tuple(vals[m] / (qq[m] * qq[n]) for m in range(N + 1)))
    lhs = SeriesTS(tuple(rows))
    At = einf(a * x, q, N) * inv_einf(1, q, N) * inv_einf(x, q, N)
    Bs = einf(b * x, q, N) * inv_einf(1, q, N) * inv_einf(x, q, N)
    ak = qpoch_list(a, q, N)
    c = [ak[k] * (-1) ** k * q.q ** (k * (k - 1) // 2) * x ** k / qq[k] for k in range(N + 1)]
    series = _phi11_series_ts(c, lambda k: ps_inv(poch_series(a * x, q, k, N)), N, True)
    return [(lhs, SeriesTS.outer(At, Bs) * series)]


def b_double_omega(p, env):
    """exp_q(s Omega_{x,b}) exp_q(t Omega_{x,a}) 1
    = (at,bs;q)_inf/(t,s,xt,xs;q)_inf 1phi1(b; bs; q, xts)."""
    q, x, a, b, N = p.q, p.x, p.a, p.b, env.order
    qq = qpoch_list(q.q, q, N)
    rows = []
    for n in range(N + 1):
        g = lambda X, B, n=n: phi(n, a, 1, X, q)
        vals = op_pow_iter_list(OMEGA, N, g, x, b, q)
        rows.append(tuple(vals[m] / (qq[m] * qq[n]) for m in range(N + 1)))
    lhs = SeriesTS(tuple(rows))
    At = einf(a, q, N) * inv_einf(1, q, N) * inv_einf(x, q, N)
    Bs = einf(b, q, N) * inv_einf(1, q, N) * inv_einf(x, q, N)
    bk = qpoch_list(b, q, N)
    c = [bk[k] * (-1) ** k * q.q ** (k * (k - 1) // 2) * x ** k / qq[k] for k in range(N + 1)]
    series = _phi11_series_ts(c, lambda k: ps_inv(poch_series(b, q, k, N)), N, False)
    return [(lhs, SeriesTS.outer(At, Bs) * series)]


# ---------------------------------------------------------------- finite operator statements


def b_hahn_powers(p, env):
    """Delta_{x,a}^n 1 = Phi_n^{(a)}(x,1) and Omega_{x,a}^n 1 = Phi_n^{(a)}(1,x), n <= 12."""
    q, x, a = p.q, p.x, p.a
    one = lambda X, A: 1
    d = op_pow_iter_list(DELTA, 12, one, x, a, q)
    o = op_pow_iter_list(OMEGA, 12, one, x, a, q)
    out = []
    for n in range(13):
        out.append((d[n], phi(n, a, x, 1, q)))
        out.append((o[n], phi(n, a, 1, x, q)))
    return out


def b_hahn_ladder(p, env):
    """Delta_{x,a}^n Phi_m^{(a)}(x,1) = Phi_{m+n}^{(a)}(x,1), and the Omega analogue in (1, x); m, n <= 6.

    Phi_m is handed to the operator as a function of both x and a.
    """
    q, x, a = p.q, p.x, p.a
    out = []
    for m in range(7):
        fd = lambda X, A, m=m: phi(m, A, X, 1, q)
        fo = lambda X, A, m=m: phi(m, A, 1, X, q)
        d = op_pow_iter_list(DELTA, 6, fd, x, a, q)
        o = op_pow_iter_list(OMEGA, 6, fo, x, a, q)
        for n in range(7):
            out.append((d[n], phi(m + n, a, x, 1, q)))
            out.append((o[n], phi(m + n, a, 1, x, q)))
    return out


def b_bilinear_operator(p, env):
    """exp_q(t Delta_{x,a} Delta_{y,b}) 1 = sum Phi_n^{(a)}(x,1) Phi_n^{(b)}(y,1) t^n/(q;q)_n, and the Omega form in (1, x), (1, y)."""
    q, x, y, a, b, N = p.q, p.x, p.y, p.a, p.b, env.order
    one = lambda *v: 1
    qq = qpoch_list(q.q, q, N)
    out = []
    for kind, px, py in ((DELTA, (x, 1), (y, 1)), (OMEGA, (1, x), (1, y))):
        vals = composed_pow_iter(kind, N, one, x, y, a, b, q)
        lhs = SeriesT(tuple(v / qq[n] for n, v in enumerate(vals)))
        rhs = SeriesT(tuple(phi(n, a, *px, q) * phi(n, b, *py, q) / qq[n] for n in range(N + 1)))
        out.append((lhs, rhs))
    return out


def b_expq_modes(p, env):
    """exp_q(t T) f by the shifted-value form, the raw operator series, and the q-derivative form."""
    q, t, x, a = p.q, p.t, p.x, p.a
    out = []
    for kind in (DELTA, OMEGA):
        for f in UNIVARIATE.values():
            closed = expq_op(kind, t, f, x, a, q, "closed", env.tail)
            out.append((closed, expq_op(kind, t, f, x, a, q, "series", env.tail)))
            out.append((closed, expq_op(kind, t, f, x, a, q, "qderiv", env.tail)))
    return out


def b_delta_qderiv(p, env):
    """Delta_{x,a}^n f = sum_k [n,k] (-x)^k q^binom(k,2) Phi_{n-k}^{(a)}(x,1) D^k f, n <= 8."""
    q, x, a = p.q, p.x, p.a
    out = []
    for f in UNIVARIATE.values():
        it = op_pow_iter_list(DELTA, 8, f, x, a, q)
        for n in range(9):
            out.append((delta_pow_via_qderiv(n, f, x, a, q), it[n]))
    return out


def b_mixed(p, env):
    """Delta^n and Omega^n of f(x, a) expanded in shifted q-derivatives, against iteration, n <= 8."""
    q, x, a = p.q, p.x, p.a
    out = []
    for kind in (DELTA, OMEGA):
        for f in BIVARIATE.values():
            it = op_pow_iter_list(kind, 8, f, x, a, q)
            for n in range(9):
                out.append((op_pow_mixed(kind, n, f, x, a, q), it[n]))
    return out


def _composed(kind):
    def build(p, env):
        q, x, y, a, b, N = p.q, p.x, p.y, p.a, p.b, env.order
        qq = qpoch_list(q.q, q, N)
        out = []
        for f in FOUR_VARIABLE.values():
            xf = composed_pow_iter(kind, N, f, x, y, a, b, q, first="x")
            yf = composed_pow_iter(kind, N, f, x, y, a, b, q, first="y")
            lhs = SeriesT(tuple(v / qq[n] for n, v in enumerate(xf)))
            out.append((lhs, SeriesT(tuple(v / qq[n] for n, v in enumerate(yf)))))
            rhs = SeriesT(tuple(composed_expq_coeff(kind, d, f, x, y, a, b, q) for d in range(N + 1)))
            out.append((lhs, rhs))
        return out

    return build


b_composed_delta = _composed(DELTA)
b_composed_delta.__doc__ = """exp_q(t Delta_{y,b} Delta_{x,a}) f
    = sum_{s,k,l,n} (a;q)_{s+k} (b;q)_{s+l} x^{s+k} y^{s+l} t^{s+k+l+n} q^{kl} / ((q;q)_s (q;q)_k (q;q)_l (q;q)_n)
      f(x q^{n+l}, y q^{n+k}, a q^{s+k}, b q^{s+l})"""
b_composed_omega = _composed(OMEGA)
b_composed_omega.__doc__ = """exp_q(t Omega_{x,a} Omega_{y,b}) f
    = sum_{s,k,l,n} (a;q)_{s+k} (b;q)_{s+l} x^{l+n} y^{k+n} t^{s+k+l+n} q^{sn} / (...)
      f(x q^{s+k}, y q^{s+l}, a q^{s+k}, b q^{s+l})"""


# ---------------------------------------------------------------- bilinear generating functions


def mehler_rhs(a, b, x, y, q, N, mutant=False) -> SeriesT:
    """(axt,byt;q)_inf/(t,xt,yt;q)_inf 3phi2(a,b,t; axt,byt; q, xyt) as a series in t."""
    sign = -1 if mutant else 1
    pre = einf(a * x, q, N) * einf(b * y, q, N) * inv_einf(1, q, N, sign) * inv_einf(x, q, N) * inv_einf(y, q, N)
    qq = qpoch_list(q.q, q, N)
    ak, bk = qpoch_list(a, q, N), qpoch_list(b, q, N)
    total = SeriesT.constant(0, N, q.prec)
    for k in range(N + 1):
        term = poch_series(1, q, k, N) * ps_inv(poch_series(a * x, q, k, N)) * ps_inv(poch_series(b * y, q, k, N))
        total = total + term.scale(ak[k] * bk[k] * (x * y) ** k / qq[k]).shift(k)
    return pre * total


def b_mehler_operator(p, env):
    """exp_q(t Delta_{y,b} Delta_{x,a}) 1 = (axt,byt;q)_inf/(t,xt,yt;q)_inf 3phi2(a,b,t; axt,byt; q, xyt)."""
    q, x, y, a, b, N = p.q, p.x, p.y, p.a, p.b, env.order
    qq = qpoch_list(q.q, q, N)
    vals = composed_pow_iter(DELTA, N, lambda *v: 1, x, y, a, b, q)
    lhs = SeriesT(tuple(v / qq[n] for n, v in enumerate(vals)))
    return [(lhs, mehler_rhs(a, b, x, y, q, N))]


def b_mehler(p, env):
    """sum Phi_n^{(a)}(x,1) Phi_n^{(b)}(y,1) t^n/(q;q)_n = (axt,byt;q)_inf/(t,xt,yt;q)_inf 3phi2(a,b,t; axt,byt; q, xyt)."""
    q, x, y, a, b, N = p.q, p.x, p.y, p.a, p.b, env.order
    qq = qpoch_list(q.q, q, N)
    lhs = SeriesT(tuple(phi(n, a, x, 1, q) * phi(n, b, y, 1, q) / qq[n] for n in range(N + 1)))
    return [(lhs, mehler_rhs(a, b, x, y, q, N, env.mutant))]


def b_mehler_dual(p, env):
    """sum Phi_n^{(a)}(1,x) Phi_n^{(b)}(1,y) t^n/(q;q)_n = (aty,btx;q)_inf/(xt,yt,xyt;q)_inf 3phi2(a,b,xyt; aty,btx; q, t)."""
    q, x, y, a, b, N = p.q, p.x, p.y, p.a, p.b, env.order
    qq = qpoch_list(q.q, q, N)
    lhs = SeriesT(tuple(phi(n, a, 1, x, q) * phi(n, b, 1, y, q) / qq[n] for n in range(N + 1)))
    pre = einf(a * y, q, N) * einf(b * x, q, N) * inv_einf(x, q, N) * inv_einf(y, q, N) * inv_einf(x * y, q, N)
    ak, bk = qpoch_list(a, q, N), qpoch_list(b, q, N)
    total = SeriesT.constant(0, N, q.prec)
    for k in range(N + 1):
        term = poch_series(x * y, q, k, N) * ps_inv(poch_series(a * y, q, k, N)) * ps_inv(poch_series(b * x, q, k, N))
        total = total + term.scale(ak[k] * bk[k] / qq[k]).shift(k)
    return [(lhs, pre * total)]


def _hahn_lazy(a, x, y, q) -> Lazy:
    return Lazy(lambda n: phi(n, a, x, y, q))


def b_mehler_shifted(p, env):
    """sum_k Phi_{n+k}^{(a)}(x,1) Phi_{m+k}^{(b)}(y,1) t^k/(q;q)_k = (axt,byt;q)_inf/(t,xt,yt;q)_inf
    sum_{k<=m, j<=n} [m,k][n,j] (xt;q)_{n-j} (yt;q)_{m-k} x^j y^k
    sum_l (a;q)_{j+l} (b;q)_{k+l} (t;q)_l / ((q;q)_l (axt;q)_{n+l} (byt;q)_{m+l}) (xyt q^{m+n-k-j})^l."""
    q, x, y, a, b, t, tail = p.q, p.x, p.y, p.a, p.b, p.t, p.__dict__.get("tail")
    tail = env.tail
    PA, PB, iq = _hahn_lazy(a, x, 1, q), _hahn_lazy(b, y, 1, q), inv_qq(q)
    pre = (pinf(a * x * t, q, tail) * pinf(b * y * t, q, tail)
           / (pinf(t, q, tail) * pinf(x * t, q, tail) * pinf(y * t, q, tail)))
    out = []
    for m in range(4):
        for n in range(4):
            lhs = sum_indexed(lambda k: PA[n + k] * PB[m + k] * t ** k * iq[k], tail)
            rm, rn = gauss_binom_row(m, q), gauss_binom_row(n, q)
            rhs = Scalar(0, q.prec)
            for k in range(m + 1):
                for j in range(n + 1):
                    head = (rm[k] * rn[j] * qpoch(x * t, q, n - j) * qpoch(y * t, q, m - k) * x ** j * y ** k
                            * qpoch(a, q, j) * qpoch(b, q, k) / (qpoch(a * x * t, q, n) * qpoch(b * y * t, q, m)))
                    z = x * y * t * q.q ** (m + n - k - j)
                    inner = rphis(PhiSpec((a * q.q ** j, b * q.q ** k, t),
                                          (a * x * t * q.q ** n, b * y * t * q.q ** m), q, z), tail)
                    rhs = rhs + head * inner
            out.append((lhs, pre * rhs))
    return out


def b_mehler_shifted_dual(p, env):
    """sum_k Phi_{n+k}^{(a)}(1,x) Phi_{m+k}^{(b)}(1,y) t^k/(q;q)_k = (aty,btx;q)_inf/(xt,yt,xyt;q)_inf
    sum_{k<=m, j<=n} [m,k][n,j] (xt;q)_j (yt;q)_k x^{n-j} y^{m-k}
    sum_l (a;q)_{j+l} (b;q)_{k+l} (xyt;q)_{k+j+l} t^l / ((q;q)_l (aty;q)_{k+j+l} (btx;q)_{k+j+l})."""
    q, x, y, a, b, t, tail = p.q, p.x, p.y, p.a, p.b, p.t, env.tail
    PA, PB, iq = _hahn_lazy(a, 1, x, q), _hahn_lazy(b, 1, y, q), inv_qq(q)
    pre = (pinf(a * t * y, q, tail) * pinf(b * t * x, q, tail)
           / (pinf(x * t, q, tail) * pinf(y * t, q, tail) * pinf(x * y * t, q, tail)))
    out = []
    for m in range(4):
        for n in range(4):
            lhs = sum_indexed(lambda k: PA[n + k] * PB[m + k] * t ** k * iq[k], tail)
            rm, rn = gauss_binom_row(m, q), gauss_binom_row(n, q)
            rhs = Scalar(0, q.prec)
            for k in range(m + 1):
                for j in range(n + 1):
                    s = k + j
                    head = (rm[k] * rn[j] * qpoch(x * t, q, j) * qpoch(y * t, q, k) * x ** (n - j) * y ** (m - k)
                            * qpoch(a, q, j) * qpoch(b, q, k) * qpoch(x * y * t, q, s)
                            / (qpoch(a * t * y, q, s) * qpoch(b * t * x, q, s)))
                    qs = q.q ** s
                    inner = rphis(PhiSpec((a * q.q ** j, b * q.q ** k, x * y * t * qs),
                                          (a * t * y * qs, b * t * x * qs), q, t), tail)
                    rhs = rhs + head * inner
            out.append((lhs, pre * rhs))
    return out


def b_product(p, env):
    """Product formulas, m, n <= 6:
    Phi_{m+n}^{(a)}(x,1) = sum_k [n,k][m,k] (q;q)_k (-1)^k q^binom(k,2) x^k
                           sum_j [n-k,j] (a;q)_{j+k} x^j Phi_{m-k}^{(a q^{j+k})}(x,1)
    Phi_{m+n}^{(a)}(1,x) = sum_k [n,k][m,k] (q;q)_k (-1)^k q^binom(k,2) x^k (a;q)_k
                           sum_j [n-k,j] (a q^k;q)_j x^{n-k-j} Phi_{m-k}^{(a q^{j+k})}(1,x)
    """
    q, x, a = p.q, p.x, p.a
    out = []
    for m in range(7):
        for n in range(7):
            out.append((phi(m + n, a, x, 1, q), product_x1(m, n, a, x, q)))
            out.append((phi(m + n, a, 1, x, q), product_1x(m, n, a, x, q)))
    return out


def product_x1(m, n, a, x, q) -> Scalar:
    rn, rm = gauss_binom_row(n, q), gauss_binom_row(m, q)
    qq = qpoch_list(q.q, q, n)
    total = Scalar(0, q.prec)
    for k in range(min(m, n) + 1):
        inner_row = gauss_binom_row(n - k, q)
        inner = Scalar(0, q.prec)
        for j in range(n - k + 1):
            inner = inner + inner_row[j] * qpoch(a, q, j + k) * x ** j * phi(m - k, a * q.q ** (j + k), x, 1, q)
        total = total + rn[k] * rm[k] * qq[k] * (-1) ** k * q.q ** (k * (k - 1) // 2) * x ** k * inner
    return total


def product_1x(m, n, a, x, q) -> Scalar:
    rn, rm = gauss_binom_row(n, q), gauss_binom_row(m, q)
    qq = qpoch_list(q.q, q, n)
    total = Scalar(0, q.prec)
    for k in range(min(m, n) + 1):
        inner_row = gauss_binom_row(n - k, q)
        aqk = qpoch_list(a * q.q ** k, q, n - k)
        inner = Scalar(0, q.prec)
        for j in range(n - k + 1):
            inner = inner + inner_row[j] * aqk[j] * x ** (n - k - j) * phi(m - k, a * q.q ** (j + k), 1, x, q)
        total = (total + rn[k] * rm[k] * qq[k] * (-1) ** k * q.q ** (k * (k - 1) // 2) * x ** k
                 * qpoch(a, q, k) * inner)
    return total


# ---------------------------------------------------------------- transformations


def b_phi22(p, env):
    """2phi2(xs, s; asx, xts; q, axt) = (axt;q)_inf/(axs;q)_inf 2phi2(xt, t; axt, xts; q, axs)."""
    q, a, x, s, t, tail = p.q, p.a, p.x, p.s, p.t, env.tail
    lhs = rphis(PhiSpec((x * s, s), (a * s * x, x * t * s), q, a * x * t), tail)
    rhs = (pinf(a * x * t, q, tail) / pinf(a * x * s, q, tail)
           * rphis(PhiSpec((x * t, t), (a * x * t, x * t * s), q, a * x * s), tail))
    return [(lhs, rhs)]


def b_heine(p, env):
    """2phi1(a, b; c; q, z) = (c/b, bz;q)_inf/(c, z;q)_inf 2phi1(abz/c, b; bz; q, c/b)."""
    q, a, b, c, z, tail = p.q, p.a, p.b, p.c, p.z, env.tail
    lhs = rphis(PhiSpec((a, b), (c,), q, z), tail)
    rhs = (pinf(c / b, q, tail) * pinf(b * z, q, tail) / (pinf(c, q, tail) * pinf(z, q, tail))
           * rphis(PhiSpec((a * b * z / c, b), (b * z,), q, c / b), tail))
    return [(lhs, rhs)]


def b_heine_omega(p, env):
    """2phi1(xt, a; at; q, s) = (as, t;q)_inf/(at, s;q)_inf 2phi1(xs, a; as; q, t)."""
    q, a, x, s, t, tail = p.q, p.a, p.x, p.s, p.t, env.tail
    lhs = rphis(PhiSpec((x * t, a), (a * t,), q, s), tail)
    rhs = (pinf(a * s, q, tail) * pinf(t, q, tail) / (pinf(a * t, q, tail) * pinf(s, q, tail))
           * rphis(PhiSpec((x * s, a), (a * s,), q, t), tail))
    return [(lhs, rhs)]


def b_psi(p, env):
    """sum_k [n,k] (-1)^k q^binom(k,2) psi_k^{(a)}(x) Delta_{x,a}^{n-k} f = (-x)^n q^binom(n,2) D^n f  (n <= 8),
    the f = 1 case sum_k [n,k] (-1)^k q^binom(k,2) psi_k Phi_{n-k}^{(a)}(x,1) = 0  (1 <= n <= 10),
    and sum_n (-1)^n q^binom(n,2) psi_n^{(a)}(x) w^n/(q;q)_n = (w, wx;q)_inf/(axw;q)_inf."""
    q, x, a, N = p.q, p.x, p.a, env.order
    psis = [psi(k, a, x, q) for k in range(max(11, N + 1))]
    out = []
    for f in UNIVARIATE.values():
        it = op_pow_iter_list(DELTA, 8, f, x, a, q)
        ds = qderiv_all(f, x, q, 8, a)
        for n in range(9):
            row = gauss_binom_row(n, q)
            terms = [row[k] * (-1) ** k * q.q ** (k * (k - 1) // 2) * psis[k] * it[n - k] for k in range(n + 1)]
            rhs = (-x) ** n * q.q ** (n * (n - 1) // 2) * ds[n]
            out.append((_sum(terms), rhs, _maxabs(terms)))
    for n in range(1, 11):
        row = gauss_binom_row(n, q)
        terms = [row[k] * (-1) ** k * q.q ** (k * (k - 1) // 2) * psis[k] * phi(n - k, a, x, 1, q)
                 for k in range(n + 1)]
        out.append((_sum(terms), Scalar(0, q.prec), _maxabs(terms)))
    qq = qpoch_list(q.q, q, N)
    gf = SeriesT(tuple((-1) ** n * q.q ** (n * (n - 1) // 2) * psis[n] / qq[n] for n in range(N + 1)))
    out.append((gf, einf(1, q, N) * einf(x, q, N) * inv_einf(a * x, q, N)))
    return out


def vanishing_sum_terms(n, a, x, q) -> list[Scalar]:
    row = gauss_binom_row(n, q)
    return [row[k] * (-1) ** k * q.q ** (k * (k - 1) // 2) * psi(k, a, x, q) * phi(n - k, a, x, 1, q)
            for k in range(n + 1)]


def _sum(xs):
    total = xs[0]
    for v in xs[1:]:
        total = total + v
    return total


def _maxabs(xs):
    return max((abs(v) for v in xs), key=lambda s: s.v)


def _lazy_product(u: Lazy, v: Lazy) -> Lazy:
    """Cauchy product of two coefficient sequences."""
    return Lazy(lambda n: _sum([u[i] * v[n - i] for i in range(n + 1)]))


def _exp_coeffs(z, q) -> Lazy:
    """Coefficients of exp_q(z w) in w: z^n/(q;q)_n."""
    iq = inv_qq(q)
    return Lazy(lambda n: z ** n * iq[n])


def b_two_operators(p, env):
    """exp_q(a Delta_x) 1 * exp_q(s Delta_{x,a}) exp_q(t Delta_{x,a}) 1
    = exp_q(t Delta_x) exp_q(s Delta_x) exp_q(a Delta_x) 1.

    Left: (sum a^n h_n(x)/(q;q)_n) * sum_N Phi_N^{(a)}(x,1) [w^N] exp_q(sw) exp_q(tw);
    right: sum_N h_N(x) [w^N] exp_q(tw) exp_q(sw) exp_q(aw), with h_N = Phi_N^{(0)}(x,1).
    Both are also compared with the closed form
    (axs;q)_inf / (a, ax, s, xt, xs;q)_inf 2phi1(sx, ax; asx; q, t)."""
    q, a, x, s, t, tail = p.q, p.a, p.x, p.s, p.t, env.tail
    zero = Scalar(0, q.prec)
    h = _hahn_lazy(zero, x, 1, q)
    hahn_a = _hahn_lazy(a, x, 1, q)
    ea, es, et = _exp_coeffs(a, q), _exp_coeffs(s, q), _exp_coeffs(t, q)
    st = _lazy_product(es, et)
    sta = _lazy_product(st, ea)
    left = (sum_indexed(lambda n: ea[n] * h[n], tail, what="Rogers-Szego series")
            * sum_indexed(lambda n: hahn_a[n] * st[n], tail, what="Hahn double series"))
    right = sum_indexed(lambda n: h[n] * sta[n], tail, what="Rogers-Szego triple series")
    closed = (pinf(a * x * s, q, tail)
              / (pinf(a, q, tail) * pinf(a * x, q, tail) * pinf(s, q, tail) * pinf(x * t, q, tail)
                 * pinf(x * s, q, tail))
              * rphis(PhiSpec((s * x, a * x), (a * s * x,), q, t), tail))
    return [(left, right), (left, closed)]


# ---------------------------------------------------------------- summation formulas


def gauss_generalized_lhs(a, b, c, z, q, tail) -> Scalar:
    """sum_n (a,b;q)_n/(q,c;q)_n (c/ab)^n 2phi1(c/a, b q^n; c q^n; q, az)."""
    w = c / (a * b)

    def terms():
        coef = Scalar(1, q.prec)
        qn = Scalar(1, q.prec)
        while True:
            yield coef * rphis(PhiSpec((c / a, b * qn), (c * qn,), q, a * z), tail)
            coef = coef * (1 - a * qn) * (1 - b * qn) * w / ((1 - q.q * qn) * (1 - c * qn))
            qn = qn * q.q

    return sum_tail(terms(), tail, "generalized q-Gauss")


def gauss_generalized_rhs(a, b, c, z, q, tail) -> Scalar:
    return (pinf(c / a, q, tail) * pinf(c / b, q, tail) * pinf(a * b * z, q, tail)
            / (pinf(c, q, tail) * pinf(c / (a * b), q, tail) * pinf(a * z, q, tail)))


def b_gauss_generalized(p, env):
    """sum_n (a,b;q)_n/(q,c;q)_n (c/ab)^n 2phi1(c/a, b q^n; c q^n; q, az) = (c/a, c/b, abz;q)_inf/(c, c/ab, az;q)_inf."""
    q, tail = p.q, env.tail
    return [(gauss_generalized_lhs(p.a, p.b, p.c, p.z, q, tail),
             gauss_generalized_rhs(p.a, p.b, p.c, p.z, q, tail))]


def theta_spec(a, u, t, x, s, q, n) -> ThetaSpec:
    """The double series of the summation formula at outer index n, zero-padded so every exponent is 0."""
    utx = u * t * x
    return ThetaSpec((a, utx), (u * t * q.q ** n, 0), (0,), (a * t * x, 0), (0,), (), q, s, t * q.q ** n)


def summation_lhs(a, u, t, x, s, q, tail) -> Scalar:
    """sum_n (ut;q)_n x^n/(q;q)_n Theta_n, with each Theta_n summed only as accurately as its weight needs."""
    state = {"total": None}

    def terms():
        coef = Scalar(1, q.prec)
        qn = Scalar(1, q.prec)
        n = 0
        while True:
            if coef.is_zero():
                yield coef
            else:
                total = state["total"]
                inner = tail
                if total is not None and not total.is_zero():
                    # relative accuracy eps * |S| / |coef| suffices for this term
                    ratio = abs(total) / abs(coef)
                    if ratio > 1:
                        inner = type(tail)(tail.eps * ratio, tail.max_terms)
                val = coef * theta_double(theta_spec(a, u, t, x, s, q, n), inner.tighter(4))
                yield val
            coef = coef * (1 - u * t * qn) * x / (1 - q.q * qn)
            qn = qn * q.q
            n += 1

    def tracked():
        for v in terms():
            state["total"] = v if state["total"] is None else state["total"] + v
            yield v

    return sum_tail(tracked(), tail, "summation formula")


def summation_rhs(a, u, t, x, s, q, tail, mutant=False) -> Scalar:
    """(as, tx, utx;q)_inf/(x, s, atx;q)_inf 2phi1(a, us; as; q, t)."""
    num = pinf(a * s, q, tail) * pinf(t * x, q, tail) * pinf(u * t * x, q, tail)
    den = pinf(x, q, tail) * pinf(s, q, tail)
    # the mutant flips the sign of q inside (atx;q)_inf
    atx = pinf(a * t * x, QValue(-q.q) if mutant else q, tail)
    pre = num / (den * atx)
    return pre * rphis(PhiSpec((a, u * s), (a * s,), q, t), tail)


def b_summation(p, env):
    """sum_n (ut;q)_n x^n/(q;q)_n Theta[a,utx : utq^n,0 ; 0 / atx,0 : 0 ; - ; q; s, tq^n]
    = (as, tx, utx;q)_inf/(x, s, atx;q)_inf 2phi1(a, us; as; q, t)."""
    q, tail = p.q, env.tail
    lhs = summation_lhs(p.a, p.u, p.t, p.x, p.s, q, tail)
    return [(lhs, summation_rhs(p.a, p.u, p.t, p.x, p.s, q, tail, env.mutant))]


def reduced_lhs(u, t, x, s, q, tail) -> Scalar:
    """sum_n (t, ut;q)_n x^n/(q, ut^2x;q)_n 2phi1(utx, utq^n; ut^2xq^n; q, s)."""
    c = u * t * t * x

    def terms():
        coef = Scalar(1, q.prec)
        qn = Scalar(1, q.prec)
        while True:
            yield coef * rphis(PhiSpec((u * t * x, u * t * qn), (c * qn,), q, s), tail)
            coef = coef * (1 - t * qn) * (1 - u * t * qn) * x / ((1 - q.q * qn) * (1 - c * qn))
            qn = qn * q.q

    return sum_tail(terms(), tail, "a = 0 summation")


def b_summation_zero(p, env):
    """The summation formula at a = 0:
    sum_n (t, ut;q)_n x^n/(q, ut^2x;q)_n 2phi1(utx, utq^n; ut^2xq^n; q, s) = (tx, utx, ust;q)_inf/(x, s, ut^2x;q)_inf,
    whose left side is (t;q)_inf/(ut^2x;q)_inf times the a = 0 double-series side, and which is the
    generalized q-Gauss sum at (a, b, c, z) = (t, ut, ut^2x, s/t)."""
    q, u, t, x, s, tail = p.q, p.u, p.t, p.x, p.s, env.tail
    zero = Scalar(0, q.prec)
    c = u * t * t * x
    theta_side = summation_lhs(zero, u, t, x, s, q, tail)
    rem = reduced_lhs(u, t, x, s, q, tail)
    rem_rhs = (pinf(t * x, q, tail) * pinf(u * t * x, q, tail) * pinf(u * s * t, q, tail)
               / (pinf(x, q, tail) * pinf(s, q, tail) * pinf(c, q, tail)))
    return [
        (theta_side, summation_rhs(zero, u, t, x, s, q, tail)),
        (theta_side, pinf(c, q, tail) / pinf(t, q, tail) * rem),
        (rem, rem_rhs),
        (rem, gauss_generalized_lhs(t, u * t, c, s / t, q, tail)),
        (rem_rhs, gauss_generalized_rhs(t, u * t, c, s / t, q, tail)),
    ]


# ---------------------------------------------------------------- the registry


def _lt(bound):
    return lambda *vs: _max_abs(*vs) < bound


REGISTRY: tuple[Identity, ...] = (
    Identity("I-0a", "q-binomial theorem", "1phi0(a; -; q, z) = (az;q)_inf/(z;q)_inf", "numeric",
             (P("a", -1, 1), P("z", Fraction(-3, 4), Fraction(3, 4))), b_qbinomial),
    Identity("I-0b", "Euler pair", "sum z^n/(q;q)_n = 1/(z;q)_inf; sum (-1)^n q^binom(n,2) z^n/(q;q)_n = (z;q)_inf",
             "numeric", (P("z", Fraction(-3, 4), Fraction(3, 4)),), b_euler),
    Identity("I-0c", "Jackson transformation",
             "2phi1(a,b;c;q,z) = (az;q)_inf/(z;q)_inf 2phi2(a, c/b; c, az; q, bz)", "numeric",
             (P("a", -1, 1), P("b", -1, 1, True), P("c", Fraction(-7, 8), Fraction(7, 8)),
              P("z", Fraction(-3, 4), Fraction(3, 4))),
             b_jackson, lambda p: _max_abs(p.z, p.b * p.z) < Fraction(9, 10) and _abs(p.a * p.z) < Fraction(9, 10)),
    Identity("I-0d", "q-Gauss summation", "2phi1(a,b;c;q,c/ab) = (c/a, c/b;q)_inf/(c, c/ab;q)_inf", "numeric",
             (P("a", -1, 1, True), P("b", -1, 1, True), P("c", Fraction(-7, 8), Fraction(7, 8))),
             b_qgauss, lambda p: _abs(p.c / (p.a * p.b)) < Fraction(9, 10)),
    Identity("I-1.1", "exp_q(t Delta_x) on a function of x",
             "exp_q(t Delta_x) f(x) = 1/(xt;q)_inf sum t^n f(q^n x)/(q;q)_n", "coeff_t",
             (P("x", -1, 1),), b_liu_plain),
    Identity("I-1.2a", "exp_q(t Delta_{x,a}) on a function of x",
             b_expq_delta.__doc__, "coeff_t", (P("x", -1, 1), P("a", -1, 1)), b_expq_delta),
    Identity("I-1.2b", "exp_q(t Omega_{x,a}) on a function of x",
             b_expq_omega.__doc__, "coeff_t", (P("x", -1, 1), P("a", -1, 1)), b_expq_omega),
    Identity("I-2.1", "exp_q of Delta_{x,a} and Omega_{x,a} on 1", b_expq_one.__doc__, "coeff_t",
             (P("x", -1, 1), P("a", -1, 1)), b_expq_one),
    Identity("I-2.2a", "two Delta exponentials on 1", b_double_delta.__doc__, "coeff_ts",
             (P("x", -1, 1), P("a", -1, 1), P("b", -1, 1)), b_double_delta, lambda p: p.a != p.b),
    Identity("I-2.2b", "two Omega exponentials on 1", b_double_omega.__doc__, "coeff_ts",
             (P("x", -1, 1), P("a", -1, 1), P("b", -1, 1)), b_double_omega, lambda p: p.a != p.b),
    Identity("I-2.3", "operator powers on 1 are Hahn polynomials", b_hahn_powers.__doc__, "finite",
             (P("x", -2, 2), P("a", -2, 2)), b_hahn_powers),
    Identity("I-2.4", "operator powers raise the Hahn degree", b_hahn_ladder.__doc__, "finite",
             (P("x", -2, 2), P("a", -2, 2)), b_hahn_ladder),
    Identity("I-2.5", "bilinear operator representation", b_bilinear_operator.__doc__, "coeff_t",
             (P("x", -1, 1), P("y", -1, 1), P("a", -1, 1), P("b", -1, 1)), b_bilinear_operator,
             lambda p: p.a != p.b),
    Identity("I-2.6", "exp_q actions through q-derivatives",
             "exp_q(t Delta_{x,a}) f = (axt;q)_inf/(t,xt;q)_inf sum (-xt)^n q^binom(n,2) D^n f/(q;q)_n; "
             "exp_q(t Omega_{x,a}) f = (at;q)_inf/(t,xt;q)_inf sum (a;q)_n (-xt)^n q^binom(n,2) D^n f/((q;q)_n (at;q)_n)",
             "numeric", (P("t", -H, H), P("x", -1, 1, True), P("a", -1, 1)), b_expq_modes,
             lambda p: _max_abs(p.x * p.t, p.a * p.t) <= H),
    Identity("I-2.7", "Delta^n through q-derivatives", b_delta_qderiv.__doc__, "finite",
             (P("x", -1, 1, True), P("a", -1, 1)), b_delta_qderiv),
    Identity("I-2.8", "mixed expansions of Delta^n and Omega^n", op_pow_mixed.__doc__.split("\n\n")[1].strip(),
             "finite", (P("x", -1, 1, True), P("a", -1, 1)), b_mixed),
    Identity("I-2.9", "exp_q(t Delta_{y,b} Delta_{x,a}) on a function of four variables",
             b_composed_delta.__doc__, "coeff_t",
             (P("x", -1, 1), P("y", -1, 1), P("a", -1, 1), P("b", -1, 1)), b_composed_delta),
    Identity("I-2.10", "exp_q(t Omega_{x,a} Omega_{y,b}) on a function of four variables",
             b_composed_omega.__doc__, "coeff_t",
             (P("x", -1, 1), P("y", -1, 1), P("a", -1, 1), P("b", -1, 1)), b_composed_omega),
    Identity("I-3.1", "exp_q(t Delta_{y,b} Delta_{x,a}) 1 as a 3phi2", b_mehler_operator.__doc__, "coeff_t",
             (P("x", -1, 1), P("y", -1, 1), P("a", -1, 1), P("b", -1, 1)), b_mehler_operator),
    Identity("I-3.2", "q-Mehler formula for Hahn polynomials", b_mehler.__doc__, "coeff_t",
             (P("x", -1, 1), P("y", -1, 1), P("a", -1, 1), P("b", -1, 1)), b_mehler),
    Identity("I-3.3", "q-Mehler formula, dual form", b_mehler_dual.__doc__, "coeff_t",
             (P("x", -1, 1), P("y", -1, 1), P("a", -1, 1), P("b", -1, 1)), b_mehler_dual),
    Identity("I-3.4", "shifted q-Mehler formula", b_mehler_shifted.__doc__, "numeric",
             (P("x", -H, H), P("y", -H, H), P("a", -1, 1), P("b", -1, 1), P("t", -H, H, True)),
             b_mehler_shifted),
    Identity("I-3.5", "shifted q-Mehler formula, dual form", b_mehler_shifted_dual.__doc__, "numeric",
             (P("x", -H, H), P("y", -H, H), P("a", -1, 1), P("b", -1, 1), P("t", -H, H, True)),
             b_mehler_shifted_dual),
    Identity("I-3.6", "product formulas for Hahn polynomials", b_product.__doc__, "finite",
             (P("x", -2, 2), P("a", -2, 2)), b_product),
    Identity("I-4.1", "2phi2 transformation", b_phi22.__doc__, "numeric",
             (P("a", -1, 1), P("x", -1, 1), P("s", -1, 1), P("t", -1, 1)), b_phi22,
             lambda p: _max_abs(p.a * p.x * p.t, p.a * p.x * p.s) < Fraction(9, 10)),
    Identity("I-4.2", "Heine's second transformation", b_heine.__doc__, "numeric",
             (P("a", -1, 1), P("b", Fraction(-7, 8), Fraction(7, 8), True), P("c", -H, H, True),
              P("z", Fraction(-7, 8), Fraction(7, 8))),
             b_heine, lambda p: _max_abs(p.c, p.z, p.c / p.b) < Fraction(9, 10)),
    Identity("I-4.2r", "Heine-type transformation from Omega", b_heine_omega.__doc__, "numeric",
             (P("a", -1, 1), P("x", -1, 1), P("s", Fraction(-3, 4), Fraction(3, 4)),
              P("t", Fraction(-3, 4), Fraction(3, 4))), b_heine_omega),
    Identity("I-4.3", "Al-Salam-Carlitz psi and Delta_{x,a}", b_psi.__doc__, "finite",
             (P("x", -1, 1, True), P("a", -1, 1, True), P("w", 0, 0)), b_psi),
    Identity("I-4.4", "Delta_{x,a} against Delta_x", b_two_operators.__doc__, "numeric",
             (P("a", -H, H), P("s", -H, H), P("t", -H, H), P("x", -1, 1)), b_two_operators,
             lambda p: _max_abs(p.a * p.x, p.s * p.x, p.t * p.x) < Fraction(9, 10)),
    Identity("I-5.1", "generalized q-Gauss summation", b_gauss_generalized.__doc__, "numeric",
             (P("a", -1, 1, True), P("b", -1, 1, True), P("c", -H, H), P("z", -1, 1)), b_gauss_generalized,
             lambda p: _abs(p.c / (p.a * p.b)) <= H and _abs(p.a * p.z) <= H),
    Identity("I-5.2", "double-series q-summation", b_summation.__doc__, "numeric",
             (P("a", -S, S), P("u", -S, S), P("t", -H, H), P("x", -H, H), P("s", -H, H)), b_summation),
    Identity("I-5.2r", "double-series q-summation at a = 0", b_summation_zero.__doc__, "numeric",
             (P("u", -S, S, True), P("t", -H, H, True), P("x", -H, H), P("s", -H, H)), b_summation_zero,
             lambda p: _abs(p.s / p.t) <= 2),
)

_BY_ID = {i.id: i for i in REGISTRY}

MUTANTS: dict[str, Identity] = {i: _BY_ID[i].as_mutant() for i in ("I-3.2", "I-5.2")}


def ids() -> list[str]:
    return [i.id for i in REGISTRY]


def get_identity(ident_id: str) -> Identity:
    if ident_id in _BY_ID:
        return _BY_ID[ident_id]
    for m in MUTANTS.values():
        if m.id == ident_id:
            return m
    raise KeyError(ident_id)
