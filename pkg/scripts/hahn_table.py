#!/usr/bin/env python3
"""Print Phi_n^{(a)}(x, 1) and psi_n^{(a)}(x) for n = 0..N, plus the residual of the
vanishing sum sum_k [n,k] (-1)^k q^{k(k-1)/2} psi_k Phi_{n-k}."""

import argparse

from qhahn import QValue, Scalar, parse_rational, phi, psi
from qhahn.verify.registry import vanishing_sum_terms


def main():
    ap = argparse.ArgumentParser(description="Hahn polynomial table")
    ap.add_argument("--a", default="1/3")
    ap.add_argument("--x", default="2/5")
    ap.add_argument("--q", default="1/2")
    ap.add_argument("-N", type=int, default=10)
    args = ap.parse_args()
    a, x = (Scalar(parse_rational(v)) for v in (args.a, args.x))
    q = QValue(Scalar(parse_rational(args.q)))

    print(f"{'n':>3s} {'Phi_n':>24s} {'psi_n':>24s} {'vanishing sum':>12s}")
    for n in range(args.N + 1):
        terms = vanishing_sum_terms(n, a, x, q)
        resid = sum(terms[1:], terms[0]) if n else Scalar(0)
        print(f"{n:3d} {phi(n, a, x, 1, q).to_decimal(20):>24s} {psi(n, a, x, q).to_decimal(20):>24s} "
              f"{resid.to_sci(2):>12s}")


if __name__ == "__main__":
    main()
