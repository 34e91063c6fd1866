#!/usr/bin/env python3
"""Hunt for integers that are simultaneously smooth and digit-sparse.

Scans growing value limits for a fixed prime set and digit allowance and
prints every hit; the expectation is that hits dry up quickly once single
digits are left behind.

Example:
    python scripts/run_smooth_search.py --base 2 --k 3 --primes 3,5,7 --limit 1e12
"""

import argparse
import sys

from smoothdigits.experiments import smooth_sparse_search


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--base", type=int, default=2)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--primes", default="3,5,7")
    ap.add_argument("--limit", type=float, default=1e12)
    ap.add_argument("--eps", type=float, default=0.0)
    args = ap.parse_args()

    primes = tuple(int(p) for p in args.primes.split(","))
    hits = smooth_sparse_search(args.base, args.k, primes, int(args.limit), eps=args.eps)
    print(
        f"base {args.base}, k <= {args.k}, primes {primes}, "
        f"limit {int(args.limit):,}: {len(hits)} hit(s)"
    )
    for h in hits:
        mark = ""
        if h.cor15_exceeded is False:
            mark = "  <- below the digit threshold"
        print(f"  {h.value}  (nonzero digits: {h.nz}){mark}")


if __name__ == "__main__":
    sys.exit(main())
