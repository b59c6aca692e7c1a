"""Command-line front end.

    qhahn list
    qhahn verify --id I-3.2 --order 12 --samples 5 --format json
    qhahn eval qpoch --a 1/2 --q 1/2 --n 2

Exit codes: 0 all pass, 1 some fail, 2 usage error, 3 inconclusive without fails.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import hahn, qcore
from .errors import QSeriesError, TailNotReached
from .hyper import PhiSpec, rphis
from .pseries import INF
from .scalar import DEFAULT_PREC, QValue, Scalar, TailConfig, parse_rational

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _rational(text: str):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _rational_list(text: str):
    if not text.strip():
        return []
    return [_rational(t) for t in text.split(",")]


def _count(text: str):
    if text.strip().lower() in ("inf", "infinity"):
        return INF
    try:
        n = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


def _nonneg(text: str) -> int:
    n = _count(text)
    if n is INF:
        raise argparse.ArgumentTypeError("must be finite")
    return n


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qhahn", description="q-series evaluation and identity verification")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    ls = sub.add_parser("list", help="list registered identities")
    ls.add_argument("--format", choices=("text", "json"), default="text")

    v = sub.add_parser("verify", help="verify identities")
    v.add_argument("--id", required=True, help="identity id or 'all'")
    v.add_argument("--order", type=_nonneg, default=12)
    v.add_argument("--samples", type=int, default=5)
    v.add_argument("--prec", type=int, default=DEFAULT_PREC)
    v.add_argument("--tol", type=_rational, default=parse_rational("1e-25"))
    v.add_argument("--zero-floor", type=_rational, default=parse_rational("1e-40"))
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--format", choices=("text", "json"), default="text")

    e = sub.add_parser("eval", help="evaluate a single function")
    fns = e.add_subparsers(dest="fn", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--q", type=_rational, required=True)
    common.add_argument("--digits", type=_nonneg, default=30)
    common.add_argument("--prec", type=int, default=DEFAULT_PREC)

    qp = fns.add_parser("qpoch", parents=[common], help="(a;q)_n, n may be 'inf'")
    qp.add_argument("--a", type=_rational, required=True)
    qp.add_argument("--n", type=_count, required=True)

    ph = fns.add_parser("phi", parents=[common], help="homogeneous Hahn polynomial Phi_n^{(a)}(x, y)")
    ph.add_argument("--n", type=_nonneg, required=True)
    ph.add_argument("--a", type=_rational, required=True)
    ph.add_argument("--x", type=_rational, required=True)
    ph.add_argument("--y", type=_rational, default=1)

    ps = fns.add_parser("psi", parents=[common], help="Al-Salam-Carlitz psi_n^{(a)}(x)")
    ps.add_argument("--n", type=_nonneg, required=True)
    ps.add_argument("--a", type=_rational, required=True)
    ps.add_argument("--x", type=_rational, required=True)

    rp = fns.add_parser("rphis", parents=[common], help="basic hypergeometric rphis")
    rp.add_argument("--upper", type=_rational_list, required=True, help="comma-separated, e.g. 1/2,1/3")
    rp.add_argument("--lower", type=_rational_list, default=[], help="comma-separated; empty for none")
    rp.add_argument("--z", type=_rational, required=True)
    return p


def _cmd_list(args, out) -> int:
    from .verify.registry import REGISTRY
    if args.format == "json":
        import json
        out.write(json.dumps([{"id": i.id, "title": i.title, "mode": i.mode, "statement": i.ref}
                              for i in REGISTRY], indent=2) + "\n")
    else:
        for i in REGISTRY:
            out.write(f"{i.id:8s} {i.mode:9s} {i.title}\n")
    return EXIT_PASS


def _cmd_verify(args, out) -> int:
    from .verify.harness import VerifyConfig, reports_to_json, verify_all
    from .verify.registry import get_identity, ids

    if args.id == "all":
        wanted = ids()
    else:
        try:
            get_identity(args.id)
        except KeyError:
            raise UsageError(f"unknown identity id: {args.id}") from None
        wanted = [args.id]
    try:
        cfg = VerifyConfig(order=args.order, samples=args.samples, prec=args.prec, rel_tol=args.tol,
                           zero_floor=args.zero_floor, seed=args.seed, jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    reports = verify_all(cfg, wanted)
    if args.format == "json":
        out.write(reports_to_json(reports) + "\n")
    else:
        for r in reports:
            err = r.max_rel_err
            line = f"{r.id:14s} {r.verdict:12s} max_rel_err={err.to_sci(3) if err is not None else '-'}"
            notes = [s.error for s in r.samples if s.error]
            if notes:
                line += f"  ({notes[0]})"
            out.write(line + "\n")
    verdicts = {r.verdict for r in reports}
    if "fail" in verdicts:
        return EXIT_FAIL
    if "inconclusive" in verdicts:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


def _cmd_eval(args, out) -> int:
    prec = args.prec
    if prec < 16:
        raise UsageError("--prec must be at least 16")
    try:
        q = QValue(Scalar(args.q, prec))
    except QSeriesError as exc:
        raise UsageError(str(exc)) from None
    tail = TailConfig.for_prec(prec)
    if args.fn == "qpoch":
        val = qcore.qpoch_inf(args.a, q, tail) if args.n is INF else qcore.qpoch(args.a, q, args.n)
    elif args.fn == "phi":
        val = hahn.phi(args.n, args.a, args.x, args.y, q)
    elif args.fn == "psi":
        val = hahn.psi(args.n, args.a, args.x, q)
    else:
        val = rphis(PhiSpec(tuple(args.upper), tuple(args.lower), q, args.z), tail)
    out.write(val.to_decimal(args.digits) + "\n")
    return EXIT_PASS


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
        if args.verb == "list":
            return _cmd_list(args, out)
        if args.verb == "verify":
            return _cmd_verify(args, out)
        return _cmd_eval(args, out)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except QSeriesError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_INCONCLUSIVE if isinstance(exc, TailNotReached) else EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
