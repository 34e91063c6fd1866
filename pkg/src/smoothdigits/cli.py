"""Command-line front end.

Every subcommand writes machine-readable records to stdout (or --output)
and keeps diagnostics on stderr, so the data stream is always clean JSON
lines (with a leading {"schema": 1} header record), CSV with a header row,
or bare decimal lines for plain enumerations.

Exit status: 0 success, 2 usage or domain error, 3 success but some
factorization hit its budget and results are partial.
"""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import bounds as bmod
from . import experiments as xmod
from . import sequences as qmod
from .digits import nz_count
from .factor import (
    DEFAULT_BUDGET,
    IncompleteFactorizationError,
    PrimeSet,
    factorize,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARTIAL = 3


@dataclass
class RunConfig:
    """Resolved output options shared by all subcommands."""

    format: str
    output: Optional[str]
    budget: int
    threads: int


# ---------------------------------------------------------------------------
# output plumbing


def _flatten_for_csv(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ";".join(
            "^".join(str(x) for x in item) if isinstance(item, (list, tuple)) else str(item)
            for item in value
        )
    return value


class RecordWriter:
    """Emits dict records as JSON lines (with schema header) or CSV."""

    def __init__(self, fmt: str, stream, fieldnames=None):
        self.fmt = fmt
        self.stream = stream
        self.fieldnames = fieldnames
        self._csv = None
        if fmt == "jsonl":
            print(json.dumps({"schema": SCHEMA_VERSION}), file=stream)

    def write(self, record: dict):
        if self.fmt == "jsonl":
            print(json.dumps(record), file=self.stream)
        else:
            if self._csv is None:
                names = self.fieldnames or list(record)
                self._csv = csv.DictWriter(self.stream, fieldnames=names)
                self._csv.writeheader()
            self._csv.writerow({k: _flatten_for_csv(v) for k, v in record.items()})


def _open_output(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _int_arg(text: str) -> int:
    """Integer flag that also accepts scientific notation like 1e9."""
    try:
        return int(text)
    except ValueError:
        value = float(text)
        if not value.is_integer():
            raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
        return int(value)


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part)


def _parse_fraction_list(text: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(part) for part in text.split(",") if part)


def _parse_float_list(text: str) -> tuple[float, ...]:
    out = []
    for part in text.split(","):
        if not part:
            continue
        out.append(math.e if part in ("e", "E") else float(part))
    return tuple(out)


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_enum(args, cfg: RunConfig) -> int:
    if args.kind in ("sparse", "powersum") and args.take is None and args.max_value is None:
        raise ValueError("unbounded stream: give --take and/or --max-value")
    if args.kind == "sparse":
        if (args.k is None) == (args.f is None):
            raise ValueError("give exactly one of --k and --f")
        if args.k is not None:
            stream = qmod.sparse_sequence(args.base, args.k, max_value=args.max_value)
        else:
            budget = qmod.parse_budget_spec(args.f)
            stream = qmod.sparse_sequence_f(
                args.base, budget, f_monotone=budget.monotone, max_value=args.max_value
            )
    elif args.kind == "powersum":
        if not args.bases:
            raise ValueError("--bases is required for powersum streams")
        spec = qmod.PowerSumSpec(
            bases=_parse_int_list(args.bases),
            shared_divisor_check=not args.no_gcd_check,
        )
        stream = spec.stream(max_value=args.max_value)
    elif args.kind == "smooth":
        if not args.primes:
            raise ValueError("--primes is required for smooth streams")
        if args.limit is None:
            raise ValueError("--limit is required for smooth streams")
        stream = qmod.smooth_sequence(_parse_int_list(args.primes), args.limit)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown stream kind {args.kind}")

    out, must_close = _open_output(args.output)
    try:
        if cfg.format == "lines":
            for j, v in enumerate(stream, start=1):
                print(v, file=out)
                if args.take is not None and j >= args.take:
                    break
        else:
            writer = RecordWriter(cfg.format, out, fieldnames=["j", "value"])
            for j, v in enumerate(stream, start=1):
                writer.write({"j": j, "value": xmod._json_int(v)})
                if args.take is not None and j >= args.take:
                    break
    finally:
        if must_close:
            out.close()
    return EXIT_OK


_FACTOR_FIELDS = ["n", "factors", "cofactor", "complete", "P", "omega", "Q"]


def _cmd_factor(args, cfg: RunConfig) -> int:
    out, must_close = _open_output(args.output)
    partial = False
    try:
        writer = RecordWriter(cfg.format, out, fieldnames=_FACTOR_FIELDS)
        for n in args.n:
            fact = factorize(n, cfg.budget)
            complete = fact.complete
            partial = partial or not complete
            record = {
                "n": xmod._json_int(n),
                "factors": xmod._json_pairs(fact.pairs),
                "cofactor": xmod._json_int(fact.cofactor),
                "complete": complete,
                "P": xmod._json_int(fact.pairs[-1][0]) if complete and fact.pairs else (1 if complete else None),
                "omega": len(fact.pairs) if complete else None,
                "Q": xmod._json_int(math.prod(fact.prime_factors)) if complete else None,
            }
            writer.write(record)
    finally:
        if must_close:
            out.close()
    return EXIT_PARTIAL if partial else EXIT_OK


def _trace_dict(report) -> dict:
    lam = report.lambda_value
    return {
        "N": xmod._json_int(report.N),
        "base": report.base,
        "branch": report.branch,
        "k": report.k,
        "k_star": report.k_star,
        "ell": report.ell,
        "p": report.p,
        "lambda_num": xmod._json_int(lam.numerator),
        "lambda_den": xmod._json_int(lam.denominator),
        "valuation": report.valuation,
        "size_condition": report.size_condition_met,
        "rows": [
            {"label": r.label, "note": r.note, "lhs": r.lhs, "rhs": r.rhs, "holds": r.holds}
            for r in report.rows
        ],
        "expected_rows_hold": report.expected_rows_hold,
    }


def _cmd_trace(args, cfg: RunConfig) -> int:
    fact = factorize(args.n, cfg.budget)
    if not fact.complete:
        raise IncompleteFactorizationError(
            f"{args.n} did not factor within budget {cfg.budget}; "
            f"raise --budget to trace it"
        )
    report = bmod.lemma31_trace(args.n, args.base, fact)
    out, must_close = _open_output(args.output)
    try:
        if cfg.format == "jsonl":
            writer = RecordWriter("jsonl", out)
            writer.write(_trace_dict(report))
        else:
            lam = report.lambda_value
            print(f"N = {args.n} (base {args.base})", file=out)
            print(
                f"branch = {report.branch}   k = {report.k}   k* = {report.k_star}",
                file=out,
            )
            if report.branch == "lambda_u":
                print(f"ell = {report.ell}   p = {report.p}   v_p = {report.valuation}", file=out)
            print(f"linear form value = {lam.numerator}/{lam.denominator}", file=out)
            print(f"size condition met: {report.size_condition_met}", file=out)
            for r in report.rows:
                mark = "ok" if r.holds else "FAIL"
                note = f" ({r.note})" if r.note else ""
                print(
                    f"  [{mark}] row {r.label}{note}: lhs={r.lhs:.6g} rhs={r.rhs:.6g}",
                    file=out,
                )
    finally:
        if must_close:
            out.close()
    return EXIT_OK


def _bounds_record(args, cfg: RunConfig) -> dict:
    op = args.op
    if op == "matveev" or op == "yu":
        rationals = _parse_fraction_list(args.rationals)
        inp = bmod.BoundInput(
            rationals=rationals,
            exponents=_parse_int_list(args.exponents),
            heights=_parse_float_list(args.heights),
            exponent_bound=args.bigb,
            assume_product_nontrivial=args.assume_nontrivial,
        )
        if op == "matveev":
            return {"op": op, "value": bmod.matveev_lower_bound(inp)}
        if args.p is None:
            raise ValueError("--p is required for the p-adic estimate")
        return {"op": op, "p": args.p, "value": bmod.yu_valuation_bound(inp, args.p)}
    if op == "thm11":
        return {"op": op, "value": bmod.thm11_threshold(args.u, args.k, args.eps)}
    if op == "thm12":
        if args.c is None or args.big_c is None:
            c, big_c = bmod.thm12_default_constants(args.base)
        else:
            c, big_c = args.c, args.big_c
        params = bmod.ThresholdParams(c_thm12=c, C_thm12=big_c)
        gap = bmod.thm12_gap(args.n, args.k, args.p_factor, args.omega, params)
        return {"op": op, "c": c, "C": big_c, "gap": gap, "holds": gap >= 0}
    if op == "psi":
        return {"op": op, "value": bmod.psi(args.u, args.f_value)}
    if op == "thm13":
        return {
            "op": op,
            "value": bmod.thm13_threshold(args.u, args.f_value, args.delta0, args.eps),
        }
    if op == "cor14":
        rows = bmod.cor14_check(args.n, args.nz)
        return {
            "op": op,
            "rows": [
                {
                    "smooth_bound": r.smooth_bound,
                    "digit_bound": r.digit_bound,
                    "applicable": r.applicable,
                    "violated": r.violated,
                }
                for r in rows
            ],
        }
    if op == "cor15":
        return {"op": op, "value": bmod.cor15_threshold(args.n, args.eps)}
    if op == "thm41":
        return {"op": op, "value": bmod.thm41_threshold(args.v, args.k, args.eps)}
    if op == "remark45":
        return {
            "op": op,
            "value": bmod.remark45_check(args.n, args.p_factor, args.c or 1.0),
        }
    if op == "nkbound":
        prime_set = PrimeSet(_parse_int_list(args.primes))
        return {
            "op": op,
            "value": bmod.lemma31_nk_bound(args.base, args.k, prime_set),
        }
    raise ValueError(f"unknown bounds operation {op}")  # pragma: no cover


def _cmd_bounds(args, cfg: RunConfig) -> int:
    record = _bounds_record(args, cfg)
    for key, value in record.items():
        if value is None:
            record[key] = "not applicable"
    out, must_close = _open_output(args.output)
    try:
        writer = RecordWriter(cfg.format, out)
        writer.write(record)
    finally:
        if must_close:
            out.close()
    return EXIT_OK


_SURVEY_FIELDS = [
    "j", "value", "base", "nz", "exponents", "digits", "complete", "factors",
    "cofactor", "P", "omega", "Q", "thm11", "thm11_exceeded", "cor15",
    "cor15_exceeded", "thm13", "thm13_exceeded", "trace_branch",
    "trace_rows_ok", "trace_size_condition",
]


def _cmd_survey_sparse(args, cfg: RunConfig) -> int:
    budget_fn = None
    if args.f is not None:
        if args.k is not None:
            raise ValueError("give exactly one of --k and --f")
        budget_fn = qmod.parse_budget_spec(args.f)
    elif args.k is None:
        raise ValueError("give exactly one of --k and --f")
    records = list(
        xmod.sparse_survey(
            args.base,
            args.count,
            k=args.k,
            budget_fn=budget_fn,
            factor_budget=cfg.budget,
            eps=args.eps,
            max_value=args.max_value,
            workers=cfg.threads,
        )
    )
    out, must_close = _open_output(args.output)
    try:
        fields = [f for f in _SURVEY_FIELDS if budget_fn or not f.startswith("thm13")]
        writer = RecordWriter(cfg.format, out, fieldnames=fields)
        for rec in records:
            writer.write(xmod.survey_record_dict(rec))
    finally:
        if must_close:
            out.close()
    for st in xmod.window_minima(records):
        print(
            f"# window t={st.t} j=[{st.j_lo},{st.j_hi}] "
            f"min_P={st.min_P} complete={st.complete}/{st.total}",
            file=sys.stderr,
        )
    return EXIT_PARTIAL if any(not r.complete for r in records) else EXIT_OK


def _cmd_survey_stewart(args, cfg: RunConfig) -> int:
    rows = xmod.stewart_survey(args.a, args.base, (args.start, args.end))
    out, must_close = _open_output(args.output)
    try:
        writer = RecordWriter(cfg.format, out, fieldnames=["n", "nz", "bound", "exceeds"])
        for row in rows:
            writer.write(xmod.stewart_row_dict(row))
    finally:
        if must_close:
            out.close()
    return EXIT_OK


def _cmd_cyclo(args, cfg: RunConfig) -> int:
    report = xmod.cyclotomic_smooth(args.n, cfg.budget)
    out, must_close = _open_output(args.output)
    try:
        if cfg.format in ("jsonl", "csv"):
            writer = RecordWriter(cfg.format, out)
            writer.write(xmod.cyclotomic_report_dict(report))
        else:
            print(f"N = 2^{args.n} + 1 = {report.N}", file=out)
            for d, value in report.parts:
                print(f"  Phi_{d}(2) = {value}", file=out)
            print(f"product check: {'OK' if report.identity_ok else 'MISMATCH'}", file=out)
            if report.complete:
                factors = " * ".join(
                    f"{p}^{e}" if e > 1 else str(p) for p, e in report.factors
                )
                print(f"factorization: {factors}", file=out)
                print(f"P[N] = {report.P}", file=out)
                print(f"smallest passing smoothness scale c = {report.min_c}", file=out)
            else:
                print(f"factorization incomplete; composite cofactor {report.cofactor}", file=out)
    finally:
        if must_close:
            out.close()
    return EXIT_OK if report.complete else EXIT_PARTIAL


def _cmd_search(args, cfg: RunConfig) -> int:
    hits = xmod.smooth_sparse_search(
        args.base, args.k, _parse_int_list(args.primes), args.limit, eps=args.eps
    )
    out, must_close = _open_output(args.output)
    try:
        writer = RecordWriter(
            cfg.format, out, fieldnames=["value", "nz", "cor15", "cor15_exceeded"]
        )
        for hit in hits:
            writer.write(xmod.search_hit_dict(hit))
    finally:
        if must_close:
            out.close()
    print(f"# {len(hits)} hit(s)", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smoothdigits",
        description="enumerate, factor and bound integers with few nonzero digits",
    )
    parser.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_BUDGET,
        help="factoring effort bound (rho iterations, default %(default)s)",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="worker processes for surveys (default 1: fully sequential)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_enum = sub.add_parser("enum", help="ordered integer streams")
    p_enum.add_argument("--kind", choices=["sparse", "powersum", "smooth"], default="sparse")
    p_enum.add_argument("--base", type=int, default=2)
    p_enum.add_argument("--k", type=int)
    p_enum.add_argument("--f", help="digit budget family, e.g. const:3, loglog:1, sqrtll:0.5")
    p_enum.add_argument("--bases", help="comma-separated bases for powersum")
    p_enum.add_argument("--no-gcd-check", action="store_true")
    p_enum.add_argument("--primes", help="comma-separated primes for smooth")
    p_enum.add_argument("--limit", type=_int_arg, help="value cutoff for smooth streams")
    p_enum.add_argument("--take", type=int, help="stop after this many terms")
    p_enum.add_argument("--max-value", type=_int_arg, help="stop when values exceed this")
    p_enum.add_argument("--format", choices=["lines", "jsonl", "csv"], default="lines")
    p_enum.add_argument("--output")
    p_enum.set_defaults(handler=_cmd_enum)

    p_factor = sub.add_parser("factor", help="factor integers")
    p_factor.add_argument("n", type=_int_arg, nargs="+")
    p_factor.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    p_factor.add_argument("--output")
    p_factor.set_defaults(handler=_cmd_factor)

    p_trace = sub.add_parser("trace", help="proof-inequality trace for one integer")
    p_trace.add_argument("n", type=_int_arg)
    p_trace.add_argument("--base", type=int, default=2)
    p_trace.add_argument("--format", choices=["text", "jsonl"], default="text")
    p_trace.add_argument("--output")
    p_trace.set_defaults(handler=_cmd_trace)

    p_bounds = sub.add_parser("bounds", help="bound and threshold calculators")
    p_bounds.add_argument(
        "op",
        choices=[
            "matveev", "yu", "thm11", "thm12", "psi", "thm13",
            "cor14", "cor15", "thm41", "remark45", "nkbound",
        ],
    )
    p_bounds.add_argument("--rationals", help="comma-separated, e.g. 2,3/2")
    p_bounds.add_argument("--exponents", help="comma-separated integers")
    p_bounds.add_argument("--heights", help="comma-separated reals; 'e' allowed")
    p_bounds.add_argument("--bigb", type=float, help="exponent bound B")
    p_bounds.add_argument("--assume-nontrivial", action="store_true")
    p_bounds.add_argument("--p", type=int, help="prime for the p-adic estimate")
    p_bounds.add_argument("--u", type=float)
    p_bounds.add_argument("--v", type=float)
    p_bounds.add_argument("--n", type=_int_arg)
    p_bounds.add_argument("--nz", type=int)
    p_bounds.add_argument("--k", type=int)
    p_bounds.add_argument("--eps", type=float, default=0.0)
    p_bounds.add_argument("--f-value", type=float)
    p_bounds.add_argument("--delta0", type=float)
    p_bounds.add_argument("--c", type=float)
    p_bounds.add_argument("--big-c", type=float, dest="big_c")
    p_bounds.add_argument("--omega", type=int)
    p_bounds.add_argument("--p-factor", type=int)
    p_bounds.add_argument("--base", type=int, default=2)
    p_bounds.add_argument("--primes")
    p_bounds.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    p_bounds.add_argument("--output")
    p_bounds.set_defaults(handler=_cmd_bounds)

    p_survey = sub.add_parser("survey", help="batch surveys")
    survey_sub = p_survey.add_subparsers(dest="survey_kind", required=True)

    p_sparse = survey_sub.add_parser("sparse", help="sparse-sequence survey")
    p_sparse.add_argument("--base", type=int, default=2)
    p_sparse.add_argument("--k", type=int)
    p_sparse.add_argument("--f", help="digit budget family spec")
    p_sparse.add_argument("--count", type=int, required=True)
    p_sparse.add_argument("--eps", type=float, default=0.0)
    p_sparse.add_argument("--max-value", type=_int_arg)
    p_sparse.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    p_sparse.add_argument("--output")
    p_sparse.set_defaults(handler=_cmd_survey_sparse)

    p_stewart = survey_sub.add_parser("stewart", help="digit counts of a**n")
    p_stewart.add_argument("--a", type=int, required=True)
    p_stewart.add_argument("--base", type=int, required=True)
    p_stewart.add_argument("--start", type=int, default=3)
    p_stewart.add_argument("--end", type=int, required=True)
    p_stewart.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    p_stewart.add_argument("--output")
    p_stewart.set_defaults(handler=_cmd_survey_stewart)

    p_cyclo = sub.add_parser("cyclo", help="cyclotomic construction of 2^n + 1")
    p_cyclo.add_argument("--n", type=int, required=True)
    p_cyclo.add_argument("--format", choices=["text", "jsonl", "csv"], default="text")
    p_cyclo.add_argument("--output")
    p_cyclo.set_defaults(handler=_cmd_cyclo)

    p_search = sub.add_parser("search", help="smooth integers with few nonzero digits")
    p_search.add_argument("--base", type=int, required=True)
    p_search.add_argument("--k", type=int, required=True)
    p_search.add_argument("--primes", required=True)
    p_search.add_argument("--limit", type=_int_arg, required=True)
    p_search.add_argument("--eps", type=float, default=0.0)
    p_search.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    p_search.add_argument("--output")
    p_search.set_defaults(handler=_cmd_search)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        format=getattr(args, "format", "jsonl"),
        output=getattr(args, "output", None),
        budget=args.budget,
        threads=args.threads,
    )
    try:
        return args.handler(args, cfg)
    except (ValueError, IncompleteFactorizationError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
