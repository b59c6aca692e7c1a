"""Sampling, comparison and reporting for registered identities."""

from __future__ import annotations

import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from types import SimpleNamespace
from typing import Callable, Sequence

from ..errors import DomainTooTight, PoleInLower, TailNotReached
from ..pseries import SeriesT, SeriesTS
from ..scalar import QValue, Scalar, TailConfig

__all__ = ["Param", "Identity", "VerifyConfig", "SampleRecord", "VerificationReport", "Env",
           "sample_params", "compare", "verify_identity", "verify_all", "reports_to_json"]

MODES = ("numeric", "coeff_t", "coeff_ts", "finite")
MAX_ATTEMPTS = 1000
INCONCLUSIVE = (TailNotReached, PoleInLower, DomainTooTight)


@dataclass(frozen=True)
class Param:
    """A sampled rational parameter in [lo, hi]; ``nonzero`` excludes 0."""

    name: str
    lo: Fraction
    hi: Fraction
    nonzero: bool = False


def P(name, lo, hi, nonzero=False) -> Param:
    return Param(name, Fraction(lo), Fraction(hi), nonzero)


@dataclass(frozen=True)
class Identity:
    """A registered statement.

    ``build(p, env)`` returns a list of comparisons ``(lhs, rhs)`` or
    ``(lhs, rhs, scale)``; sides are Scalars, SeriesT or SeriesTS.  ``scale``
    is a magnitude for statements whose sides are structurally zero.
    """

    id: str
    title: str
    ref: str
    mode: str
    params: tuple
    build: Callable
    domain: Callable = lambda p: True
    q_range: tuple = (Fraction(1, 8), Fraction(7, 8))
    mutant: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")

    def as_mutant(self) -> "Identity":
        return replace(self, mutant=True, id=self.id + "~mutant")


@dataclass(frozen=True)
class VerifyConfig:
    order: int = 12
    samples: int = 5
    prec: int = 256
    rel_tol: Fraction = Fraction(1, 10**25)
    zero_floor: Fraction = Fraction(1, 10**40)
    seed: int = 42
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "rel_tol", Fraction(self.rel_tol))
        object.__setattr__(self, "zero_floor", Fraction(self.zero_floor))
        if self.order < 0:
            raise ValueError("order must be >= 0")
        if self.samples < 1 or self.prec < 16 or self.jobs < 1:
            raise ValueError("samples, prec and jobs must be positive")
        if self.rel_tol <= Fraction(2) ** (1 - self.prec):
            raise ValueError("rel_tol must exceed 2^(1 - prec)")
        if self.zero_floor <= 0:
            raise ValueError("zero_floor must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class Env:
    """What a builder sees besides the parameters."""

    order: int
    prec: int
    tail: TailConfig
    mutant: bool = False


@dataclass(frozen=True)
class SampleRecord:
    params: dict
    max_rel_err: Scalar | None
    worst: str = ""
    error: str = ""

    def to_json(self) -> dict:
        out = {"params": {k: _ratstr(v) for k, v in self.params.items()},
               "max_rel_err": None if self.max_rel_err is None else self.max_rel_err.to_sci(6)}
        if self.worst:
            out["worst"] = self.worst
        if self.error:
            out["error"] = self.error
        return out


@dataclass(frozen=True)
class VerificationReport:
    id: str
    mode: str
    verdict: str  # pass | fail | inconclusive
    samples: tuple = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def max_rel_err(self) -> Scalar | None:
        errs = [s.max_rel_err for s in self.samples if s.max_rel_err is not None]
        return max(errs, key=lambda e: e.v) if errs else None

    def to_json(self) -> dict:
        return {"id": self.id, "mode": self.mode, "pass": self.passed, "verdict": self.verdict,
                "samples": [s.to_json() for s in self.samples]}


def _ratstr(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def _draw(rng: random.Random, lo: Fraction, hi: Fraction, nonzero: bool) -> Fraction | None:
    den = rng.randint(1, 16)
    nlo = max(-16, math.ceil(lo * den))
    nhi = min(16, math.floor(hi * den))
    choices = [n for n in range(nlo, nhi + 1) if not (nonzero and n == 0)]
    if not choices:
        return None
    return Fraction(rng.choice(choices), den)


def sample_params(identity: Identity, cfg: VerifyConfig) -> list[dict]:
    """``cfg.samples`` parameter dicts (values are Fractions), deterministic in (seed, id).

    Numerators and denominators are at most 16 in magnitude; q is drawn from
    the identity's q range (a subrange of [1/8, 7/8]).
    """
    rng = random.Random(f"{cfg.seed}:{identity.id.removesuffix('~mutant')}")
    qlo, qhi = identity.q_range
    out = []
    for _ in range(cfg.samples):
        for _attempt in range(MAX_ATTEMPTS):
            p = {}
            qv = _draw(rng, qlo, qhi, True)
            if qv is None:
                continue
            p["q"] = qv
            ok = True
            for spec in identity.params:
                v = _draw(rng, spec.lo, spec.hi, spec.nonzero)
                if v is None:
                    ok = False
                    break
                p[spec.name] = v
            if ok and identity.domain(SimpleNamespace(**p)):
                out.append(p)
                break
        else:
            raise DomainTooTight(f"{identity.id}: no admissible sample in {MAX_ATTEMPTS} attempts")
    return out


# ---------------------------------------------------------------- comparison


def _pairs(lhs, rhs):
    """Yield (label, l, r) over the coefficients both sides share."""
    if isinstance(lhs, SeriesT) and isinstance(rhs, SeriesT):
        n = min(lhs.order, rhs.order)
        for i in range(n + 1):
            yield f"t^{i}", lhs[i], rhs[i]
    elif isinstance(lhs, SeriesTS) and isinstance(rhs, SeriesTS):
        N = min(lhs.orders[0], rhs.orders[0])
        M = min(lhs.orders[1], rhs.orders[1])
        for i in range(N + 1):
            for j in range(M + 1):
                yield f"t^{i} s^{j}", lhs[i, j], rhs[i, j]
    elif isinstance(lhs, (SeriesT, SeriesTS)) or isinstance(rhs, (SeriesT, SeriesTS)):
        raise TypeError("cannot compare a series with a scalar")
    else:
        yield "", Scalar.coerce(lhs), Scalar.coerce(rhs)


def compare(items: Sequence, zero_floor, prec: int) -> tuple[Scalar, str]:
    """Max relative deviation |l - r| / max(|l|, |r|, scale, zero_floor) over all items."""
    floor = Scalar(zero_floor, prec)
    worst = Scalar(0, prec)
    where = ""
    for idx, item in enumerate(items):
        lhs, rhs = item[0], item[1]
        scale = Scalar(item[2], prec) if len(item) > 2 else floor
        for label, l, r in _pairs(lhs, rhs):
            den = max((abs(l), abs(r), abs(scale), floor), key=lambda s: s.v)
            err = abs(l - r) / den
            if err > worst:
                worst, where = err, f"item {idx}" + (f" {label}" if label else "")
    return worst, where


def verify_identity(identity: Identity, cfg: VerifyConfig = VerifyConfig()) -> VerificationReport:
    try:
        params = sample_params(identity, cfg)
    except DomainTooTight as exc:
        return VerificationReport(identity.id, identity.mode, "inconclusive",
                                  (SampleRecord({}, None, error=str(exc)),))
    env = Env(cfg.order, cfg.prec, TailConfig.for_prec(cfg.prec), identity.mutant)
    tol = Scalar(cfg.rel_tol, cfg.prec)
    records = []
    failed = inconclusive = False
    for raw in params:
        p = SimpleNamespace(**{k: Scalar(v, cfg.prec) for k, v in raw.items()})
        p.q = QValue(p.q)
        try:
            items = identity.build(p, env)
            err, where = compare(items, cfg.zero_floor, cfg.prec)
        except INCONCLUSIVE as exc:
            inconclusive = True
            records.append(SampleRecord(raw, None, error=f"{type(exc).__name__}: {exc}"))
            continue
        if err > tol:
            failed = True
        records.append(SampleRecord(raw, err, where))
    verdict = "fail" if failed else "inconclusive" if inconclusive else "pass"
    return VerificationReport(identity.id, identity.mode, verdict, tuple(records))


def _run_one(args):
    ident_id, cfg = args
    from .registry import get_identity
    return verify_identity(get_identity(ident_id), cfg)


def verify_all(cfg: VerifyConfig = VerifyConfig(), ids: Sequence[str] | None = None) -> list[VerificationReport]:
    """Verify the given ids (default: the whole registry); reports come back in registry order."""
    from .registry import REGISTRY, get_identity
    ids = list(ids) if ids is not None else [i.id for i in REGISTRY]
    if cfg.jobs > 1 and len(ids) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            return list(pool.map(_run_one, [(i, cfg) for i in ids]))
    return [verify_identity(get_identity(i), cfg) for i in ids]


def reports_to_json(reports: Sequence[VerificationReport]) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2, sort_keys=False)
