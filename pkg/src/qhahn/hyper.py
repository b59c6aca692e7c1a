"""Basic hypergeometric series r-phi-s and the double series Theta."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import PoleInLower, TailNotReached
from .qcore import qpoch
from .scalar import QValue, Scalar, TailConfig, zero_floor_for
from .summation import TailTracker

__all__ = ["PhiSpec", "ThetaSpec", "rphis", "phi_terms", "phi_term_direct", "theta_double",
           "theta_term_direct"]


def _scalars(xs, prec):
    return tuple(Scalar.coerce(x, prec) for x in xs)


@dataclass(frozen=True)
class PhiSpec:
    uppers: tuple
    lowers: tuple
    q: QValue
    z: Scalar

    def __post_init__(self):
        q = QValue.of(self.q)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "uppers", _scalars(self.uppers, q.prec))
        object.__setattr__(self, "lowers", _scalars(self.lowers, q.prec))
        object.__setattr__(self, "z", Scalar.coerce(self.z, q.prec))

    @property
    def balance(self) -> int:
        """The exponent 1 + s - r of (-1)^n q^binom(n,2)."""
        return 1 + len(self.lowers) - len(self.uppers)


def _is_zeroish(x: Scalar, floor: Scalar) -> bool:
    return x.is_zero() or abs(x) < floor


def phi_terms(spec: PhiSpec, max_terms: int = 10000) -> Iterator[Scalar]:
    """Terms of the series by the ratio recurrence; stops after an upper parameter terminates it."""
    q = spec.q.q
    prec = max([spec.q.prec, spec.z.prec] + [p.prec for p in spec.uppers + spec.lowers])
    floor = zero_floor_for(prec)
    term = Scalar(1, prec)
    qn = Scalar(1, prec)
    bal = spec.balance
    for n in range(max_terms):
        yield term
        num = spec.z
        for a in spec.uppers:
            f = 1 - a * qn
            if _is_zeroish(f, floor):
                return
            num = num * f
        den = 1 - qn * q
        for b in spec.lowers:
            f = 1 - b * qn
            if _is_zeroish(f, floor):
                raise PoleInLower(f"lower parameter {b} equals q^-{n}")
            den = den * f
        if bal:
            sq = -qn if bal > 0 else -1 / qn
            num = num * sq ** abs(bal)
        term = term * num / den
        qn = qn * q
        if term.is_zero():
            return


def phi_term_direct(spec: PhiSpec, n: int) -> Scalar:
    """The n-th term computed from scratch (no recurrence)."""
    q = spec.q
    t = Scalar(1, q.prec)
    for a in spec.uppers:
        t = t * qpoch(a, q, n)
    den = qpoch(q.q, q, n)
    for b in spec.lowers:
        den = den * qpoch(b, q, n)
    sign = -1 if n % 2 else 1
    e = n * (n - 1) // 2
    t = t * (sign * q.q ** e) ** spec.balance if spec.balance >= 0 else t / (sign * q.q ** e) ** (-spec.balance)
    return t * spec.z ** n / den


def rphis(spec: PhiSpec, tail: TailConfig | None = None) -> Scalar:
    """Sum of the r-phi-s series, terminating or tail-bounded."""
    tail = tail or TailConfig.for_prec(spec.q.prec)
    tracker = TailTracker(tail, "r-phi-s")
    total = None
    for t in phi_terms(spec, tail.max_terms + 1):
        total = t if total is None else total + t
        if tracker.push(abs(t), total):
            break
    return total


def phi(uppers: Sequence, lowers: Sequence, q, z, tail: TailConfig | None = None) -> Scalar:
    return rphis(PhiSpec(tuple(uppers), tuple(lowers), QValue.of(q), z), tail)


@dataclass(frozen=True)
class ThetaSpec:
    """Double series with parameter lists a (on m+n), b/e (on m), c/f (on n)."""

    aA: tuple
    bB: tuple
    cC: tuple
    dD: tuple
    eE: tuple
    fF: tuple
    q: QValue
    x: Scalar
    y: Scalar

    def __post_init__(self):
        q = QValue.of(self.q)
        object.__setattr__(self, "q", q)
        for name in ("aA", "bB", "cC", "dD", "eE", "fF"):
            object.__setattr__(self, name, _scalars(getattr(self, name), q.prec))
        object.__setattr__(self, "x", Scalar.coerce(self.x, q.prec))
        object.__setattr__(self, "y", Scalar.coerce(self.y, q.prec))

    @property
    def exponents(self) -> tuple[int, int, int]:
        """(D - A, 1 + E - B, 1 + F - C)."""
        return (len(self.dD) - len(self.aA), 1 + len(self.eE) - len(self.bB),
                1 + len(self.fF) - len(self.cC))

    def swapped(self) -> "ThetaSpec":
        return ThetaSpec(self.aA, self.cC, self.bB, self.dD, self.fF, self.eE, self.q, self.y, self.x)


def _signed_qpow(qn: Scalar, e: int) -> Scalar:
    """(-q^n)^e for possibly negative e."""
    if e == 0:
        return Scalar(1, qn.prec)
    base = -qn
    return base ** e if e > 0 else 1 / base ** (-e)


def theta_term_direct(spec: ThetaSpec, m: int, n: int) -> Scalar:
    q = spec.q
    t = Scalar(1, q.prec)
    for a in spec.aA:
        t = t * qpoch(a, q, m + n)
    for b in spec.bB:
        t = t * qpoch(b, q, m)
    for c in spec.cC:
        t = t * qpoch(c, q, n)
    den = qpoch(q.q, q, m) * qpoch(q.q, q, n)
    for d in spec.dD:
        den = den * qpoch(d, q, m + n)
    for e in spec.eE:
        den = den * qpoch(e, q, m)
    for f in spec.fF:
        den = den * qpoch(f, q, n)
    if den.is_zero():
        raise PoleInLower("denominator vanishes")
    eA, eB, eC = spec.exponents

    def fac(k, e):
        sign = -1 if k % 2 else 1
        base = sign * q.q ** (k * (k - 1) // 2)
        return base ** e if e >= 0 else 1 / base ** (-e)

    t = t * fac(m + n, eA) * fac(m, eB) * fac(n, eC)
    return t * spec.x ** m * spec.y ** n / den


def theta_double(spec: ThetaSpec, tail: TailConfig | None = None) -> Scalar:
    """Sum over anti-diagonal blocks m + n = K until the block tail bound holds.

    Terms are propagated by their ratios: along n inside each column m, and
    along m on the n = 0 edge.  The block sums are fed to the same
    ratio-window tail criterion used for single series.
    """
    q = spec.q.q
    prec = spec.q.prec
    tail = tail or TailConfig.for_prec(prec)
    floor = zero_floor_for(prec)
    eA, eB, eC = spec.exponents

    def check_lower(d, qk):
        f = 1 - d * qk
        if _is_zeroish(f, floor):
            raise PoleInLower(f"lower parameter {d} hits a zero factor")
        return f

    qpows = [Scalar(1, prec)]

    def qp(k):
        while len(qpows) <= k:
            qpows.append(qpows[-1] * q)
        return qpows[k]

    def ratio_common(k):
        # factors depending on m + n = k, moving to k + 1
        r = Scalar(1, prec)
        qk = qp(k)
        for a in spec.aA:
            r = r * (1 - a * qk)
        for d in spec.dD:
            r = r / check_lower(d, qk)
        if eA:
            r = r * _signed_qpow(qk, eA)
        return r

    def ratio_m(m):
        qm = qp(m)
        r = spec.x / (1 - qp(m + 1))
        for b in spec.bB:
            r = r * (1 - b * qm)
        for e in spec.eE:
            r = r / check_lower(e, qm)
        if eB:
            r = r * _signed_qpow(qm, eB)
        return r

    def ratio_n(n):
        qn = qp(n)
        r = spec.y / (1 - qp(n + 1))
        for c in spec.cC:
            r = r * (1 - c * qn)
        for f in spec.fF:
            r = r / check_lower(f, qn)
        if eC:
            r = r * _signed_qpow(qn, eC)
        return r

    common = []  # ratio_common(k) cache
    rn_cache = []

    def rc(k):
        while len(common) <= k:
            common.append(ratio_common(len(common)))
        return common[k]

    def rn(n):
        while len(rn_cache) <= n:
            rn_cache.append(ratio_n(len(rn_cache)))
        return rn_cache[n]

    diag = [Scalar(1, prec)]  # diag[m] = T(m, K - m) for current K
    total = Scalar(1, prec)
    tracker = TailTracker(tail, "Theta double series")
    tracker.push(Scalar(1, prec), total)
    K = 0
    while True:
        new = []
        block_abs = Scalar(0, prec)
        block = Scalar(0, prec)
        for m, t in enumerate(diag):
            n = K - m
            nt = t * rc(K) * rn(n)
            new.append(nt)
        edge = diag[K] * rc(K) * ratio_m(K)
        new.append(edge)
        for nt in new:
            block = block + nt
            block_abs = block_abs + abs(nt)
        diag = new
        K += 1
        total = total + block
        if all(t.is_zero() for t in diag):
            return total
        if tracker.push(block_abs, total):
            return total
