import csv
import io
import json
import shlex
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import jsonschema
import pytest

from bellstat.cli import OUTPUT_SCHEMA, run

GOLDEN = Path(__file__).parent / "golden"
CASES = [line.split("|", 1) for line in (GOLDEN / "cases.txt").read_text().splitlines() if line]


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name, command", CASES, ids=[c[0] for c in CASES])
def test_golden(name, command):
    code, out, _ = call(*shlex.split(command))
    assert code == 0
    assert out == (GOLDEN / name).read_text()


@pytest.mark.parametrize("name, command", [c for c in CASES if c[0].endswith(".json")])
def test_json_matches_schema(name, command):
    code, out, _ = call(*shlex.split(command))
    jsonschema.validate(json.loads(out), OUTPUT_SCHEMA)


def test_byte_stable():
    args = ["family-dist", "--n", "40", "--format", "json", "--no-cache"]
    assert call(*args) == call(*args)


class TestPublishedExamples:
    def test_bell(self):
        assert call("bell", "--n", "25", "--no-cache")[1] == "4638590332229999353\n"
        assert call("bell", "--n", "8", "--no-cache")[1] == "4140\n"

    @pytest.mark.parametrize("method", ["recurrence", "row_sum", "egf"])
    def test_bell_methods(self, method):
        assert call("bell", "--n", "25", "--method", method, "--no-cache")[1] == "4638590332229999353\n"

    def test_no_isolates_probability(self):
        code, out, _ = call("no-isolates", "--n", "8", "--probability", "--digits", "2", "--format", "json", "--no-cache")
        record = json.loads(out)
        assert record["rendered"]["percent"] == "17%"
        exact = Fraction(int(record["exact"]["numerator"]), int(record["exact"]["denominator"]))
        assert exact == Fraction(715, 4140)
        assert (record["result"]["count"], record["result"]["total"]) == ("715", "4140")

    def test_family_range(self):
        code, out, _ = call("family-dist", "--n", "650", "--from", "131", "--to", "140", "--digits", "3", "--no-cache")
        assert (code, out) == (0, "58.8%\n")


class TestFormatsAgree:
    def test_family_dist(self):
        plain = call("family-dist", "--n", "12", "--no-cache")[1]
        rows_csv = list(csv.reader(io.StringIO(call("family-dist", "--n", "12", "--format", "csv", "--no-cache")[1])))
        record = json.loads(call("family-dist", "--n", "12", "--format", "json", "--no-cache")[1])
        rows_plain = [line.split("\t") for line in plain.splitlines()]
        assert rows_plain == rows_csv
        assert [[str(e["k"]), e["count"], e["percent"]] for e in record["result"]["distribution"]] == rows_csv[1:]

    def test_counts_are_strings(self):
        record = json.loads(call("stirling", "--n", "30", "--format", "json", "--no-cache")[1])
        assert all(isinstance(v, str) for v in record["result"]["row"])

    def test_huge_counts_serialize(self):
        record = json.loads(call("bell", "--n", "2000", "--format", "json", "--no-cache")[1])
        assert len(record["result"]["bell"]) > 4300


class TestCache:
    def test_second_run_hits(self, cache_dir):
        first = json.loads(call("family-mode", "--n", "300", "--format", "json")[1])
        second = json.loads(call("family-mode", "--n", "300", "--format", "json")[1])
        assert (first["meta"]["cache_hit"], second["meta"]["cache_hit"]) == (False, True)
        assert first["result"] == second["result"]
        assert any(cache_dir.iterdir())

    def test_cache_dir_flag(self, tmp_path):
        d = tmp_path / "explicit"
        call("bell", "--n", "30", "--cache-dir", str(d))
        assert [p.name for p in d.iterdir()] == ["bell-30-v1.txt"]

    def test_no_cache_writes_nothing(self, cache_dir):
        call("bell", "--n", "30", "--no-cache")
        assert not cache_dir.exists()

    def test_deleted_cache_recomputes(self, cache_dir):
        call("bell", "--n", "30")
        for p in cache_dir.iterdir():
            p.unlink()
        code, out, _ = call("bell", "--n", "30")
        assert code == 0 and out == "846749014511809332450147\n"


class TestExitCodes:
    def test_unknown_subcommand(self):
        code, _, err = call("frobnicate")
        assert code == 2
        assert "usage" in err or "invalid choice" in err

    def test_unknown_flag(self):
        assert call("bell", "--n", "3", "--bogus")[0] == 2

    def test_missing_required(self):
        assert call("bell")[0] == 2

    def test_bad_method(self):
        code, _, err = call("bell", "--n", "3", "--method", "explicit", "--no-cache")
        assert code == 2 and "--method" in err

    def test_soft_cap(self):
        assert call("bell", "--n", "5001", "--no-cache")[0] == 2

    def test_soft_cap_override_warns(self, monkeypatch):
        import warnings

        import bellstat.cli as cli

        monkeypatch.setattr(cli, "bell", lambda n, method: 1)
        with warnings.catch_warnings(record=True):
            code, out, _ = call("bell", "--n", "5001", "--method", "egf", "--allow-large", "--no-cache")
        assert (code, out) == (0, "1\n")

    def test_computation_error(self):
        code, _, err = call("family-dist", "--n", "10", "--from", "6", "--to", "2", "--no-cache")
        assert code == 1 and "empty range" in err

    def test_isolate_precondition(self):
        assert call("isolate-dist", "--n", "4", "--families", "9", "--no-cache")[0] == 1


class TestSubcommands:
    def test_stirling_single(self):
        assert call("stirling", "--n", "4", "--k", "2", "--no-cache")[1] == "7\n"
        assert call("stirling", "--n", "4", "--k", "2", "--method", "explicit", "--no-cache")[1] == "7\n"
        assert call("stirling", "--n", "4", "--k", "9", "--no-cache")[1] == "0\n"

    def test_partitions_total(self):
        record = json.loads(call("partitions", "--n", "8", "--format", "json", "--no-cache")[1])
        assert record["result"]["count"] == 22
        assert record["result"]["total"] == "4140"

    def test_family_mode_tie(self):
        assert call("family-mode", "--n", "2", "--no-cache")[1] == "1 (tie)\n"

    def test_no_isolates_count(self):
        assert call("no-isolates", "--n", "8", "--no-cache")[1] == "715\n"
        assert call("no-isolates", "--n", "8", "--method", "egf", "--no-cache")[1] == "715\n"

    def test_isolate_dist_methods_agree(self):
        a = call("isolate-dist", "--n", "12", "--families", "5", "--format", "csv", "--no-cache")[1]
        b = call("isolate-dist", "--n", "12", "--families", "5", "--method", "egf", "--format", "csv", "--no-cache")[1]
        assert a == b

    def test_isolate_dist_tail(self):
        record = json.loads(
            call("isolate-dist", "--n", "650", "--families", "150", "--tail", "14", "--format", "json", "--no-cache")[1]
        )
        assert record["result"]["mean"]["decimal"] == "8.98"
        assert record["rendered"]["percent"] == "2.30%"

    def test_sample_range_and_seed(self):
        record = json.loads(
            call("sample", "--n", "30", "--count", "500", "--seed", "5", "--from", "5", "--to", "12", "--format", "json")[1]
        )
        assert record["meta"]["seed"] == 5
        assert record["meta"]["prng"] == "python-random-mt19937"
        assert 0 <= record["result"]["family_range"]["estimate"] <= 1
        assert sum(record["result"]["family_histogram"].values()) == 500

    def test_timing_only_on_request(self):
        record = json.loads(call("bell", "--n", "5", "--format", "json", "--timing", "--no-cache")[1])
        assert record["meta"]["elapsed_seconds"] >= 0
        record = json.loads(call("bell", "--n", "5", "--format", "json", "--no-cache")[1])
        assert "elapsed_seconds" not in record["meta"]


class TestReproduce:
    def test_default_passes(self):
        code, out, _ = call("reproduce-paper")
        lines = out.splitlines()
        assert code == 0
        assert all(line.startswith("PASS") for line in lines[:-1])
        assert lines[-1].endswith("claims reproduced")

    def test_injected_bell_fails(self):
        code, out, _ = call("reproduce-paper", "--inject-bell", "25=4749027089305918018")
        assert code == 1
        fail = [line for line in out.splitlines() if line.startswith("FAIL  B(25) [recurrence]")]
        assert fail == [
            "FAIL  B(25) [recurrence]: computed 4,749,027,089,305,918,018; cited 4,638,590,332,229,999,353"
        ]

    def test_africa_scenario(self):
        code, out, _ = call("reproduce-paper", "--n-africa", "1500", "--format", "csv")
        rows = {r[0]: r for r in csv.reader(io.StringIO(out))}
        assert rows["most likely family count | n=1500"][2:4] == ["267", "PASS"]
        assert rows["P(at most 4 families | n=1500)"][3] == "PASS"

    def test_json(self):
        record = json.loads(call("reproduce-paper", "--format", "json")[1])
        jsonschema.validate(record, OUTPUT_SCHEMA)
        assert record["result"]["passed"] is True

    def test_bad_injection(self):
        assert call("reproduce-paper", "--inject-bell", "25:4")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "bellstat", "bell", "--n", "8", "--no-cache"], capture_output=True, text=True
    )
    assert (proc.returncode, proc.stdout) == (0, "4140\n")
