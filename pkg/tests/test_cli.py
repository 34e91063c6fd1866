import csv
import io
import json
import subprocess
import sys

import pytest

from smoothdigits.cli import main

RUN = [sys.executable, "-m", "smoothdigits"]


def run_cli(*args, expect=0):
    proc = subprocess.run(
        RUN + list(args), capture_output=True, text=True, timeout=300
    )
    assert proc.returncode == expect, (proc.returncode, proc.stderr)
    return proc


class TestEnum:
    def test_sparse_lines(self):
        proc = run_cli("enum", "--base", "2", "--k", "2", "--take", "6")
        assert proc.stdout.split() == ["1", "3", "5", "9", "17", "33"]

    def test_jsonl_schema_header(self):
        proc = run_cli(
            "enum", "--base", "2", "--k", "2", "--take", "3", "--format", "jsonl"
        )
        lines = [json.loads(l) for l in proc.stdout.splitlines()]
        assert lines[0] == {"schema": 1}
        assert [l["value"] for l in lines[1:]] == [1, 3, 5]

    def test_powersum(self):
        proc = run_cli(
            "enum", "--kind", "powersum", "--bases", "2,2", "--take", "4"
        )
        assert proc.stdout.split() == ["5", "7", "9", "11"]

    def test_smooth(self):
        proc = run_cli(
            "enum", "--kind", "smooth", "--primes", "2,3,5", "--limit", "12"
        )
        assert proc.stdout.split() == "1 2 3 4 5 6 8 9 10 12".split()

    def test_usage_error_exit_2(self):
        run_cli("enum", "--base", "2", "--take", "3", expect=2)  # no --k/--f
        proc = subprocess.run(
            RUN + ["enum", "--bogus-flag"], capture_output=True, text=True
        )
        assert proc.returncode == 2

    def test_unbounded_stream_rejected(self):
        proc = run_cli("enum", "--base", "2", "--k", "2", expect=2)
        assert proc.stdout == ""  # no partial output on the data stream

    def test_big_values_serialized_as_strings(self):
        proc = run_cli(
            "enum", "--base", "2", "--k", "2", "--take", "60", "--format", "jsonl"
        )
        last = json.loads(proc.stdout.splitlines()[-1])
        assert isinstance(last["value"], str)
        assert int(last["value"]) == 2**59 + 1


class TestFactor:
    def test_documented_shape(self):
        proc = run_cli("factor", "4097")
        lines = proc.stdout.splitlines()
        assert json.loads(lines[0]) == {"schema": 1}
        rec = json.loads(lines[1])
        assert rec["factors"] == [[17, 1], [241, 1]]
        assert rec["P"] == 241
        assert rec["omega"] == 2
        assert rec["Q"] == 4097
        assert rec["complete"] is True

    def test_partial_exit_3(self):
        p = 2**127 - 1
        q = 170141183460469231731687303715884105757
        proc = run_cli("--budget", "10", "factor", str(p * q), expect=3)
        rec = json.loads(proc.stdout.splitlines()[1])
        assert rec["complete"] is False
        assert rec["P"] is None

    def test_csv(self):
        proc = run_cli("factor", "720", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(proc.stdout)))
        assert rows[0]["n"] == "720"
        assert rows[0]["factors"] == "2^4;3^2;5^1"


class TestTrace:
    def test_text_output(self):
        proc = run_cli("trace", str(2**20 + 2**3 + 1), "--base", "2")
        assert "lambda_a" in proc.stdout
        assert "3.4" in proc.stdout and "3.5" in proc.stdout

    def test_jsonl_output(self):
        proc = run_cli(
            "trace", str(2**10 + 2**6 + 1), "--base", "2", "--format", "jsonl"
        )
        rec = json.loads(proc.stdout.splitlines()[1])
        assert rec["branch"] == "lambda_u"
        assert rec["valuation"] == 6
        assert rec["ell"] == 1
        labels = {row["label"] for row in rec["rows"]}
        assert labels == {"3.7", "3.8"}

    def test_divisible_by_base_is_domain_error(self):
        run_cli("trace", "10", "--base", "2", expect=2)


class TestBounds:
    def test_thm11(self):
        proc = run_cli("bounds", "thm11", "--u", "1e9", "--k", "3")
        rec = json.loads(proc.stdout.splitlines()[1])
        assert abs(rec["value"] - 32.49855008971396) < 1e-9

    def test_thm11_not_applicable(self):
        proc = run_cli("bounds", "thm11", "--u", "1e6", "--k", "3")
        rec = json.loads(proc.stdout.splitlines()[1])
        assert rec["value"] == "not applicable"

    def test_matveev(self):
        proc = run_cli(
            "bounds", "matveev",
            "--rationals", "2,3", "--exponents", "1,1",
            "--heights", "e,3", "--bigb", "3",
        )
        rec = json.loads(proc.stdout.splitlines()[1])
        assert abs(rec["value"] + 10141633344.756238) < 1.0

    def test_yu(self):
        proc = run_cli(
            "bounds", "yu",
            "--rationals", "2,3", "--exponents", "1,1",
            "--heights", "e,3", "--bigb", "3", "--p", "2",
        )
        rec = json.loads(proc.stdout.splitlines()[1])
        assert abs(rec["value"] - 369692524321.156) < 1.0

    def test_thm12_defaults(self):
        proc = run_cli(
            "bounds", "thm12", "--n", str(2**64 + 1), "--k", "2",
            "--p-factor", "67280421310721", "--omega", "2", "--base", "2",
        )
        rec = json.loads(proc.stdout.splitlines()[1])
        assert rec["holds"] is True
        assert rec["gap"] > 0

    def test_nkbound(self):
        proc = run_cli(
            "bounds", "nkbound", "--base", "2", "--k", "3", "--primes", "2,3"
        )
        rec = json.loads(proc.stdout.splitlines()[1])
        assert rec["value"] > 0


class TestSurvey:
    def test_sparse_jsonl(self):
        proc = run_cli(
            "survey", "sparse", "--base", "2", "--k", "2", "--count", "6"
        )
        lines = proc.stdout.splitlines()
        assert json.loads(lines[0]) == {"schema": 1}
        recs = [json.loads(l) for l in lines[1:]]
        assert [r["value"] for r in recs] == [1, 3, 5, 9, 17, 33]
        assert [r["P"] for r in recs] == [1, 3, 5, 3, 17, 11]
        # applicability boundary for the digit threshold sits at e^e ~ 15.2
        assert [r["cor15"] for r in recs[:4]] == ["not applicable"] * 4
        assert isinstance(recs[5]["cor15"], float)
        assert all(r["thm11"] == "not applicable" for r in recs)
        assert "# window" in proc.stderr

    def test_byte_identical_reruns(self):
        args = ["survey", "sparse", "--base", "2", "--k", "3", "--count", "40"]
        a = run_cli(*args)
        b = run_cli(*args)
        assert a.stdout == b.stdout

    def test_csv_format(self):
        proc = run_cli(
            "survey", "sparse", "--base", "2", "--k", "2", "--count", "4",
            "--format", "csv",
        )
        rows = list(csv.DictReader(io.StringIO(proc.stdout)))
        assert [r["value"] for r in rows] == ["1", "3", "5", "9"]
        assert rows[1]["trace_branch"] == "lambda_a"

    def test_stewart(self):
        proc = run_cli(
            "survey", "stewart", "--a", "2", "--base", "3",
            "--start", "3", "--end", "12",
        )
        recs = [json.loads(l) for l in proc.stdout.splitlines()[1:]]
        ten = [r for r in recs if r["n"] == 10][0]
        assert ten["nz"] == 6
        assert ten["exceeds"] is True

    def test_stewart_dependent_rejected(self):
        run_cli(
            "survey", "stewart", "--a", "4", "--base", "2",
            "--start", "3", "--end", "5", expect=2,
        )

    def test_partial_factorization_exit_3(self):
        proc = run_cli(
            "--budget", "0", "survey", "sparse", "--base", "2", "--k", "2",
            "--count", "120", expect=3,
        )
        recs = [json.loads(l) for l in proc.stdout.splitlines()[1:]]
        assert any(r["complete"] is False for r in recs)
        assert all(r["P"] is None for r in recs if not r["complete"])


class TestCyclo:
    def test_text_report(self):
        proc = run_cli("cyclo", "--n", "12")
        assert "Phi_8(2) = 17" in proc.stdout
        assert "Phi_24(2) = 241" in proc.stdout
        assert "product check: OK" in proc.stdout

    def test_jsonl(self):
        proc = run_cli("cyclo", "--n", "12", "--format", "jsonl")
        rec = json.loads(proc.stdout.splitlines()[1])
        assert rec["parts"] == [[8, 17], [24, 241]]
        assert rec["identity_ok"] is True
        assert rec["P"] == 241


class TestSearch:
    def test_binary_powers_of_three(self):
        proc = run_cli(
            "search", "--base", "2", "--k", "2", "--primes", "3",
            "--limit", "1000000",
        )
        recs = [json.loads(l) for l in proc.stdout.splitlines()[1:]]
        assert [r["value"] for r in recs] == [1, 3, 9]

    def test_data_stream_clean(self):
        # diagnostics must not leak into stdout
        proc = run_cli(
            "search", "--base", "10", "--k", "2", "--primes", "2,3,5",
            "--limit", "100",
        )
        for line in proc.stdout.splitlines():
            json.loads(line)  # every stdout line parses
        assert "hit(s)" in proc.stderr


class TestMainFunction:
    def test_in_process_entry(self, capsys):
        status = main(["enum", "--base", "2", "--k", "2", "--take", "3"])
        assert status == 0
        assert capsys.readouterr().out.split() == ["1", "3", "5"]

    def test_domain_error_returns_2(self, capsys):
        status = main(["trace", "10", "--base", "2"])
        assert status == 2
        assert "error:" in capsys.readouterr().err
