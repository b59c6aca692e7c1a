#!/usr/bin/env python3
"""Verify every registered identity and print verdicts with timings.

    python3 scripts/run_registry.py                 # defaults
    python3 scripts/run_registry.py I-3.2 I-5.2 --samples 2 --json out.json
"""

import argparse
import time
from pathlib import Path

from qhahn.verify import MUTANTS, VerifyConfig, get_identity, ids, reports_to_json, verify_identity


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("ids", nargs="*")
    ap.add_argument("--order", type=int, default=12)
    ap.add_argument("--samples", type=int, default=5)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--mutants", action="store_true", help="also run the built-in mutants")
    ap.add_argument("--json", type=Path, help="write the JSON report here")
    args = ap.parse_args()

    cfg = VerifyConfig(order=args.order, samples=args.samples, seed=args.seed)
    idents = [get_identity(i) for i in (args.ids or ids())]
    if args.mutants:
        idents += list(MUTANTS.values())
    reports, total = [], 0.0
    for ident in idents:
        t0 = time.perf_counter()
        rep = verify_identity(ident, cfg)
        dt = time.perf_counter() - t0
        total += dt
        reports.append(rep)
        err = rep.max_rel_err
        print(f"{rep.id:14s} {rep.verdict:12s} {err.to_sci(2) if err is not None else '-':>10s} {dt:7.2f}s")
    print(f"{len(reports)} identities in {total:.1f}s")
    if args.json:
        args.json.write_text(reports_to_json(reports) + "\n")


if __name__ == "__main__":
    main()
