#!/usr/bin/env python3
"""Sweep the sparse-sequence survey over several digit counts and write one
JSON-lines file per (base, k), plus a window summary of the smallest
greatest-prime-factor seen per dyadic index window.

Example:
    python scripts/run_sparse_survey.py --base 2 --ks 2,3,4 --count 500 --out-dir out/
"""

import argparse
import json
import pathlib
import sys

from smoothdigits.experiments import sparse_survey, survey_record_dict, window_minima


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--base", type=int, default=2)
    ap.add_argument("--ks", default="2,3,4", help="comma-separated digit counts")
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--budget", type=int, default=200_000)
    ap.add_argument("--eps", type=float, default=0.0)
    ap.add_argument("--out-dir", default="out")
    args = ap.parse_args()

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for k in (int(x) for x in args.ks.split(",")):
        records = list(
            sparse_survey(
                args.base, args.count, k=k, factor_budget=args.budget, eps=args.eps
            )
        )
        path = out_dir / f"survey_b{args.base}_k{k}.jsonl"
        with path.open("w") as fh:
            fh.write(json.dumps({"schema": 1}) + "\n")
            for rec in records:
                fh.write(json.dumps(survey_record_dict(rec)) + "\n")
        complete = sum(r.complete for r in records)
        print(f"k={k}: {len(records)} records ({complete} fully factored) -> {path}")
        for st in window_minima(records):
            print(
                f"    window j=[{st.j_lo},{st.j_hi}]: min P = {st.min_P} "
                f"({st.complete}/{st.total} factored)"
            )


if __name__ == "__main__":
    sys.exit(main())
