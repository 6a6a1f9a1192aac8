"""CLI subcommands: formats, exit codes, golden renderings."""

import csv
import io
import json
from pathlib import Path

import pytest

from fermatshor.cli import main
from fermatshor.simulator import build_compressed_circuit, circuit_from_json

DATA = Path(__file__).parent / "data"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------- enumerate

def test_enumerate_text(capsys):
    code, out, _ = run_cli(capsys, "enumerate")
    rows = [ln for ln in out.splitlines() if ln and not ln.lstrip().startswith("N ")]
    assert code == 0
    assert len(rows) == 10
    assert any(ln.strip().startswith("15 ") for ln in rows)


def test_enumerate_json(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 10
    by_n = {r["N"]: r for r in rows}
    assert by_n[51]["phi"] == 32 and by_n[51]["b"] == 6
    assert by_n[85]["b"] == 7
    assert by_n[51]["l_max"] == 4 and by_n[51]["l_max_exact"]
    # the largest product only carries the bound, flagged inexact
    big = by_n[16843009]
    assert big["l_max"] is None and big["l_max_bound"] == 23 and not big["l_max_exact"]


def test_enumerate_csv(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0][0] == "N"
    assert len(rows) == 11


# ------------------------------------------------------------------- tables

def test_tables_51_golden(capsys):
    code, out, _ = run_cli(capsys, "tables", "51")
    assert code == 0
    assert out == (DATA / "tables_51.txt").read_text()
    assert out.count("*") == 1 and "50*" in out


def test_tables_85_golden(capsys):
    code, out, _ = run_cli(capsys, "tables", "85")
    assert code == 0
    assert out == (DATA / "tables_85.txt").read_text()
    assert out.count("*") == 5


def test_tables_json_bucket_sizes(capsys):
    code, out, _ = run_cli(capsys, "tables", "85", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    sizes = {b["l"]: len(b["bases"]) for b in doc["buckets"]}
    assert sizes == {1: 3, 2: 12, 3: 16, 4: 32}
    stars = sorted(a for b in doc["buckets"] for a in b["trivial_failure_bases"])
    assert stars == [13, 38, 47, 72, 84]


def test_tables_csv_has_one_row_per_base(capsys):
    code, out, _ = run_cli(capsys, "tables", "51", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert len(rows) == 1 + 31


def test_tables_15_matches_exhaustive_scan(capsys):
    code, out, _ = run_cli(capsys, "tables", "15", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert {b["l"]: b["bases"] for b in doc["buckets"]} == {
        1: [4, 11, 14],
        2: [2, 7, 8, 13],
    }


def test_tables_rejects_out_of_family(capsys):
    code, _, err = run_cli(capsys, "tables", "21")
    assert code == 1
    assert "not a product" in err


# ------------------------------------------------------------------- factor

def test_factor_success_exit_zero(capsys):
    code, out, _ = run_cli(capsys, "factor", "51", "--base", "2", "--mode", "exact")
    assert code == 0
    assert "3 x 17" in out


def test_factor_trivial_failure_exit_two(capsys):
    code, out, _ = run_cli(capsys, "factor", "51", "--base", "50")
    assert code == 2
    assert "trivial_minus_one" in out


def test_factor_out_of_family_exit_one(capsys):
    code, _, err = run_cli(capsys, "factor", "91")
    assert code == 1
    assert "not a product" in err


def test_factor_json_record(capsys):
    code, out, _ = run_cli(capsys, "factor", "85", "--base", "16", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["factors"] == [5, 17]
    assert doc["order"] == 2
    assert doc["seed"] == 0


def test_factor_sampled_deterministic(capsys):
    code1, out1, _ = run_cli(capsys, "factor", "51", "--mode", "sampled",
                             "--seed", "4", "--format", "json")
    code2, out2, _ = run_cli(capsys, "factor", "51", "--mode", "sampled",
                             "--seed", "4", "--format", "json")
    assert (code1, out1) == (code2, out2)


# -------------------------------------------------------------- distribution

def test_distribution_51_2(capsys):
    code, out, _ = run_cli(capsys, "distribution", "51", "2", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert len(doc["rows"]) == 16
    assert max(row["abs_diff"] for row in doc["rows"]) < 1e-10


def test_distribution_85_16_order_two_peaks(capsys):
    code, out, _ = run_cli(capsys, "distribution", "85", "16", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    sim = {row["x"]: row["simulated"] for row in doc["rows"]}
    assert sim[0] == pytest.approx(0.5, abs=1e-12)
    assert sim[8] == pytest.approx(0.5, abs=1e-12)
    assert sum(sim.values()) == pytest.approx(1, abs=1e-12)


def test_distribution_51_7_uniform(capsys):
    # base 7 has order 16, which spreads mass uniformly over all outcomes
    code, out, _ = run_cli(capsys, "distribution", "51", "7", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    for row in doc["rows"]:
        assert row["simulated"] == pytest.approx(1 / 16, abs=1e-12)


def test_distribution_csv(capsys):
    code, out, _ = run_cli(capsys, "distribution", "51", "2", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["x", "analytic", "simulated", "abs_diff"]
    assert len(rows) == 17


# ------------------------------------------------------------------- verify

def test_verify_pass(capsys):
    code, out, _ = run_cli(capsys, "verify", "51", "5")
    assert code == 0 and "PASS" in out
    code, out, _ = run_cli(capsys, "verify", "85", "3")
    assert code == 0 and "PASS" in out


def test_verify_decohere_fails_at_one_over_r(capsys):
    code, out, _ = run_cli(capsys, "verify", "51", "5", "--decohere", "--format", "json")
    doc = json.loads(out)
    assert code == 2
    assert not doc["passed"]
    assert doc["p_zero"] == pytest.approx(1 / 16, abs=1e-12)


# ---------------------------------------------------------------- export

def test_export_circuit_single_cnot(tmp_path, capsys):
    path = tmp_path / "c.json"
    code, _, _ = run_cli(capsys, "export-circuit", "51", "16", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    cnots = [g for g in doc["gates"] if g["kind"] == "cnot"]
    assert len(cnots) == 1


def test_export_circuit_four_cnots(tmp_path, capsys):
    path = tmp_path / "c.json"
    code, _, _ = run_cli(capsys, "export-circuit", "85", "3", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    assert sum(g["kind"] == "cnot" for g in doc["gates"]) == 4


def test_export_circuit_round_trip(tmp_path, capsys):
    path = tmp_path / "c.json"
    code, _, _ = run_cli(capsys, "export-circuit", "85", "2", str(path))
    assert code == 0
    assert circuit_from_json(path.read_text()) == build_compressed_circuit(85, 2)


def test_export_circuit_bad_path(tmp_path, capsys):
    code, _, err = run_cli(capsys, "export-circuit", "51", "2",
                           str(tmp_path / "missing" / "c.json"))
    assert code == 1 and "cannot write" in err


# ------------------------------------------------------------------ plumbing

def test_format_env_var(monkeypatch, capsys):
    monkeypatch.setenv("FERMATSHOR_FORMAT", "json")
    code, out, _ = run_cli(capsys, "enumerate")
    assert code == 0
    assert json.loads(out)[0]["N"] == 15


def test_format_flag_overrides_env(monkeypatch, capsys):
    monkeypatch.setenv("FERMATSHOR_FORMAT", "csv")
    code, out, _ = run_cli(capsys, "enumerate", "--format", "json")
    assert code == 0
    assert isinstance(json.loads(out), list)


def test_bad_env_format_is_usage_error(monkeypatch, capsys):
    monkeypatch.setenv("FERMATSHOR_FORMAT", "xml")
    code, _, err = run_cli(capsys, "enumerate")
    assert code == 1 and "unknown output format" in err


def test_usage_errors_exit_one():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["factor", "51", "--mode", "psychic"])
    assert exc.value.code == 1
