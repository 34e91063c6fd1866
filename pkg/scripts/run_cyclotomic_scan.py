#!/usr/bin/env python3
"""Scan the cyclotomic construction of 2**n + 1 and report, for each n whose
parts factor completely, the empirical smallest smoothness scale c with
log P <= c log N / logloglog N.  Low c marks unusually smooth shifted powers.

Example:
    python scripts/run_cyclotomic_scan.py --max-n 120 --budget 50000
"""

import argparse
import sys

from smoothdigits.experiments import cyclotomic_smooth


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=120)
    ap.add_argument("--budget", type=int, default=50_000)
    ap.add_argument("--top", type=int, default=15, help="show the smoothest cases")
    args = ap.parse_args()

    scored = []
    for n in range(1, args.max_n + 1):
        rep = cyclotomic_smooth(n, factor_budget=args.budget)
        if not rep.identity_ok:
            print(f"n={n}: PRODUCT MISMATCH", file=sys.stderr)
            continue
        if rep.min_c is not None:
            scored.append((rep.min_c, n, rep.P))
        else:
            status = "partial" if not rep.complete else "below applicability"
            print(f"n={n}: {status}")
    scored.sort()
    print(f"\nsmoothest {min(args.top, len(scored))} of {len(scored)} factored cases:")
    for c, n, p in scored[: args.top]:
        print(f"  n={n:4d}  P[2^n+1] = {p}  min c = {c:.4f}")


if __name__ == "__main__":
    sys.exit(main())
