"""Shared oracles and strategies.

Exact rational oracles work in Fractions; transcendental ones use mpmath at
a working precision well above what the comparisons need.
"""

from __future__ import annotations

import os
from fractions import Fraction

import mpmath
from hypothesis import HealthCheck, settings, strategies as st

from qhahn.scalar import Scalar

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=15, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

mpmath.mp.dps = 50


def fpoch(a, q, n) -> Fraction:
    a, q = Fraction(a), Fraction(q)
    out = Fraction(1)
    for k in range(n):
        out *= 1 - a * q**k
    return out


def fbinom(n, k, q) -> Fraction:
    return fpoch(q, q, n) / (fpoch(q, q, k) * fpoch(q, q, n - k))


def fphi(n, a, x, y, q) -> Fraction:
    return sum(fbinom(n, k, q) * fpoch(a, q, k) * Fraction(x) ** k * Fraction(y) ** (n - k) for k in range(n + 1))


def mp_of(v):
    v = Fraction(v)
    return mpmath.mpf(v.numerator) / v.denominator


def rel(got, want) -> float:
    """|got - want| / max(|want|, 1e-60) as a float, exact where possible."""
    g = Fraction(*_ratio(got))
    w = Fraction(*_ratio(want))
    den = max(abs(w), Fraction(1, 10**60))
    return float(abs(g - w) / den)


def _ratio(v):
    if isinstance(v, Scalar):
        import gmpy2
        r = gmpy2.mpq(v.v)
        return int(r.numerator), int(r.denominator)
    if isinstance(v, mpmath.mpf):
        sign, man, e, _ = v._mpf_
        m = -int(man) if sign else int(man)
        return (m * 2**e, 1) if e >= 0 else (m, 2**(-e))
    v = Fraction(v)
    return v.numerator, v.denominator


def rationals(lo, hi, nonzero=False):
    """Rationals p/d with |p|, d <= 16 in [lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    pool = sorted({Fraction(n, d) for d in range(1, 17) for n in range(-16, 17)
                   if lo <= Fraction(n, d) <= hi and not (nonzero and n == 0)})
    return st.sampled_from(pool)


qs = rationals(Fraction(1, 8), Fraction(7, 8), nonzero=True)


def mp_rphis(uppers, lowers, q, z, terms=700):
    """r-phi-s by a fixed number of terms in mpmath arithmetic."""
    ups = [mp_of(u) for u in uppers]
    lows = [mp_of(b) for b in lowers]
    q, z = mp_of(q), mp_of(z)
    bal = 1 + len(lows) - len(ups)
    total, term, qn = mpmath.mpf(0), mpmath.mpf(1), mpmath.mpf(1)
    for _ in range(terms):
        total += term
        num = z
        for u in ups:
            num *= 1 - u * qn
        den = 1 - q * qn
        for b in lows:
            den *= 1 - b * qn
        term = term * num / den * (-qn) ** bal
        qn *= q
    return total
