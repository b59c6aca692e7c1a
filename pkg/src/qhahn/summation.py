"""Tail-bounded summation of convergent series.

The criterion: once the last few term magnitudes decrease monotonically with
ratio at most rho < 1, the remaining tail is bounded by |t_n| rho / (1 - rho).
Series whose magnitudes oscillate fall back to an envelope: the maxima of two
consecutive blocks of BLOCK terms give a per-term decay rate rho, and the tail
is bounded by BLOCK * M rho / (1 - rho) with M the latest block maximum.
Summation stops when the bound is below ``eps * |S|``.  This assumes the
term ratios keep contracting, which holds for every series summed here past
a small index (their term ratios tend to a constant of modulus < 1 or to 0).
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator

import gmpy2

from .errors import TailNotReached
from .scalar import Scalar, TailConfig

WINDOW = 3
BLOCK = 8


class TailTracker:
    """Tracks term magnitudes and decides when the tail is small enough."""

    def __init__(self, tail: TailConfig, what: str = "series"):
        self.tail = tail
        self.what = what
        self.mags: list[Scalar] = []
        self.count = 0

    def bound(self) -> Scalar | None:
        """Tail estimate from the last WINDOW magnitudes, or None if not yet contracting."""
        b = self._monotone()
        return b if b is not None else self._envelope()

    def _monotone(self) -> Scalar | None:
        m = self.mags
        if len(m) < WINDOW + 1:
            return None
        recent = m[-(WINDOW + 1):]
        if recent[-1].is_zero():
            # zero after contracting nonzero terms: keep waiting unless all zero
            return recent[-1] if all(r.is_zero() for r in recent) else None
        rho = None
        for prev, cur in zip(recent, recent[1:]):
            if prev.is_zero() or cur > prev:
                return None
            r = cur / prev
            rho = r if rho is None or r > rho else rho
        if rho >= 1:
            return None
        return recent[-1] * rho / (1 - rho)

    def _envelope(self) -> Scalar | None:
        m = self.mags
        if len(m) < 2 * BLOCK or self.count % BLOCK:
            return None
        old = max(m[-2 * BLOCK:-BLOCK], key=lambda s: s.v)
        new = max(m[-BLOCK:], key=lambda s: s.v)
        if new.is_zero():
            return None
        if old.is_zero() or new >= old:
            return None
        rho = Scalar._wrap(gmpy2.root((new / old).v, BLOCK), new.prec)
        return new * BLOCK * rho / (1 - rho)

    def push(self, mag: Scalar, total: Scalar) -> bool:
        """Record a term magnitude; True once the series may stop."""
        self.count += 1
        self.mags.append(mag)
        if len(self.mags) > 2 * BLOCK:
            self.mags.pop(0)
        b = self.bound()
        if b is not None and b <= self.tail.eps * abs(total):
            return True
        if b is not None and b.is_zero():
            return True
        if self.count >= self.tail.max_terms:
            raise TailNotReached(f"{self.what}: tail bound not met in {self.tail.max_terms} terms")
        return False


def sum_tail(terms: Iterable[Scalar], tail: TailConfig, what: str = "series") -> Scalar:
    """Sum an (infinite) iterable of terms under the tail criterion.

    A finite iterable is summed completely; exhausting it counts as exact
    termination.
    """
    tracker = TailTracker(tail, what)
    total = None
    for t in terms:
        total = t if total is None else total + t
        if tracker.push(abs(t), total):
            break
    if total is None:
        raise ValueError("empty series")
    return total


def sum_indexed(term: Callable[[int], Scalar], tail: TailConfig, start: int = 0,
                what: str = "series") -> Scalar:
    def gen() -> Iterator[Scalar]:
        n = start
        while True:
            yield term(n)
            n += 1

    return sum_tail(gen(), tail, what)
