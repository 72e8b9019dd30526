import json
from fractions import Fraction

import pytest

from tugame.cli import main
from tugame.config import VERSION
from tugame.modes import verify
from tugame.prekernel import SolveStatus


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_no_command_prints_help(capsys):
    code, out, _ = run(capsys)
    assert code == 1
    assert "usage:" in out


def test_unknown_command(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 1
    assert "invalid choice" in err


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0
    assert VERSION in out


def test_prekernel_trace(capsys, example_file):
    code, out, _ = run(capsys, "prekernel", example_file, "--start", "10,0,0,0", "--trace")
    assert code == 0
    assert "Status: Converged" in out
    assert "y1 = (128/37, 98/37, 91/37, 60/37)" in out
    assert "x = (5/2, 7/2, 2, 2)" in out
    assert "ITERATION 3" in out


def test_prekernel_json_counts_are_ints(capsys, example_file):
    code, out, _ = run(capsys, "prekernel", example_file, "--start", "10,0,0,0", "--json")
    assert code == 0
    results = json.loads(out)["results"]
    assert results["steps"] == 3
    assert isinstance(results["bound"], int)
    assert results["terminal"] == ["5/2", "7/2", "2", "2"]


def test_prenucleolus_cross_check(capsys, example_file):
    code, out, _ = run(capsys, "prenucleolus", example_file)
    assert code == 0
    assert "PASS" in out


def test_prenucleolus_json_envelope(capsys, example_file):
    code, out, _ = run(capsys, "prenucleolus", example_file, "--json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"command", "version", "inputs", "results", "diagnostics", "timing"}
    assert doc["command"] == "prenucleolus"
    assert doc["version"] == VERSION
    assert len(doc["inputs"]["sha256"]) == 64
    assert doc["results"]["lp_oracle"]["x"] == ["5/2", "7/2", "2", "2"]
    assert doc["results"]["cross_check"] == "PASS"
    assert all(level["balanced"] for level in doc["results"]["kohlberg"])


def test_oracle_with_workers(capsys, example_file):
    code, out, _ = run(capsys, "oracle", example_file, "--workers", "2", "--json")
    assert code == 0
    assert json.loads(out)["results"]["x"] == ["5/2", "7/2", "2", "2"]


def test_leastcore_vertices(capsys, example_file):
    code, out, _ = run(capsys, "leastcore", example_file, "--vertices")
    assert code == 0
    assert "Core: nonempty" in out
    assert "VERTICES (2)" in out
    assert "(2, 4, 2, 2)" in out
    assert "(3, 3, 2, 2)" in out


def test_core_check(capsys, example_file):
    code, out, _ = run(capsys, "core", example_file, "--check", "3,3,2,2")
    assert code == 0
    assert "in the core" in out

    code, out, _ = run(capsys, "core", example_file, "--check", "10,0,0,0")
    assert code == 0
    assert "NOT in the core" in out
    assert "blocking:" in out


def test_kohlberg_at_core_point_fails(capsys, example_file):
    code, out, _ = run(capsys, "kohlberg", example_file, "--at", "3,3,2,2")
    assert code == 0
    assert "criterion fails" in out

    code, out, _ = run(capsys, "kohlberg", example_file)
    assert "every level balanced" in out


def test_props_and_shapley(capsys, example_file):
    code, out, _ = run(capsys, "props", example_file, "--json")
    assert code == 0
    assert json.loads(out)["results"]["convex"] is True

    code, out, _ = run(capsys, "shapley", example_file, "--json")
    assert code == 0
    phi = json.loads(out)["results"]["shapley"]
    assert len(phi) == 4


def test_surplus_selection(capsys, example_file):
    code, out, _ = run(capsys, "surplus", example_file, "--at", "10,0,0,0", "--json")
    assert code == 0
    assert len(json.loads(out)["results"]["selection"]) == 12


def test_stearns_step_cap_exit_code(capsys, example_file):
    code, out, _ = run(capsys, "stearns", example_file, "--start", "10,0,0,0", "--max-steps", "1")
    assert code == 3
    assert "Status: StepCapHit" in out
    assert "Transfers: 1" in out


def test_stearns_rejects_bad_tolerance(capsys, example_file):
    code, _, err = run(capsys, "stearns", example_file, "--start", "10,0,0,0", "--tol", "abc")
    assert code == 1
    assert "ERROR:" in err


@pytest.mark.parametrize("collection, verdict", [
    ("1,2;1,3;2,3", "Verdict: balanced"),
    ("1;1,2", "Verdict: not balanced"),
])
def test_balanced(capsys, collection, verdict):
    n = "3" if collection.count(";") == 2 else "2"
    code, out, _ = run(capsys, "balanced", n, collection)
    assert code == 0
    assert verdict in out


def test_balanced_weights_json(capsys):
    code, out, _ = run(capsys, "balanced", "3", "1,2;1,3;2,3", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["weights"] == {"{1,2}": "1/2", "{1,3}": "1/2", "{2,3}": "1/2"}


def test_rgp_audit_verdicts(capsys, example_file):
    code, out, _ = run(capsys, "rgp-audit", example_file)
    assert code == 0
    assert "Verdict: SelectionAmbiguous" in out
    assert "TWO-VERTEX WITNESS" in out

    code, out, _ = run(capsys, "rgp-audit", example_file, "--supply", "5/2,7/2,2,2")
    assert code == 0
    assert "Verdict: MatchesNucleolus" in out


def test_bad_vector_is_usage_error(capsys, example_file):
    code, _, err = run(capsys, "surplus", example_file, "--at", "1,2")
    assert code == 1
    assert "expected 4 components" in err


def test_missing_game_file(capsys, tmp_path):
    code, _, err = run(capsys, "props", str(tmp_path / "absent.game"))
    assert code == 2
    assert "ERROR:" in err


def test_malformed_game_file(capsys, tmp_path):
    path = tmp_path / "bad.game"
    path.write_text("players 3\n1,2 x\n", encoding="utf-8")
    code, _, err = run(capsys, "props", str(path))
    assert code == 2
    assert ":2:" in err


def test_workers_must_be_positive(capsys, example_file):
    code, _, err = run(capsys, "oracle", example_file, "--workers", "0")
    assert code == 1
    assert "--workers" in err


def test_report_to_file(capsys, example_file, tmp_path):
    target = tmp_path / "reports" / "shapley.txt"
    code, out, _ = run(capsys, "shapley", example_file, "--output", str(target))
    assert code == 0
    assert "Report written to:" in out
    text = target.read_text(encoding="utf-8")
    assert text.startswith("SHAPLEY VALUE")
    assert "=" * 60 in text


def test_verify_small_batch(capsys, tmp_path):
    target = tmp_path / "verify.txt"
    code, out, _ = run(capsys, "verify", "--games", "3", "--players", "3", "--output", str(target),
                       "--workers", "1")
    assert code == 0
    assert "disagree: 0" in out
    assert "SOLVER / ORACLE VERIFICATION" in target.read_text(encoding="utf-8")


def test_verify_rejects_bad_players(capsys):
    code, _, _ = run(capsys, "verify", "--players", "1,3")
    assert code == 1


def test_config_set_and_show(capsys):
    code, out, _ = run(capsys, "config", "--set", "workers=3")
    assert code == 0
    assert "workers set to 3" in out

    code, out, _ = run(capsys, "config")
    assert code == 0
    assert "workers: 3" in out
    assert "max_n: 12" in out


@pytest.mark.parametrize("assignment", ["workers", "colour=blue", "max_n=0"])
def test_config_rejects_bad_assignment(capsys, assignment):
    code, _, err = run(capsys, "config", "--set", assignment)
    assert code == 1
    assert "ERROR:" in err


def test_verify_disagreement_exits_3(capsys, tmp_path, monkeypatch):
    def disagreeing(index, n, seed):
        return {"index": index, "n": n, "status": SolveStatus.ITERATION_CAP_HIT, "steps": 1, "bound": 2,
                "solver": (Fraction(1),) * n, "oracle": (Fraction(0),) * n, "agree": False, "stearns": None}

    monkeypatch.setattr(verify, "check_one", disagreeing)
    code, out, _ = run(capsys, "verify", "--games", "2", "--players", "3", "--workers", "1",
                       "--output", str(tmp_path / "verify.txt"))
    assert code == 3
    assert "disagree: 2" in out
    assert "DISAGREEMENTS (2)" in (tmp_path / "verify.txt").read_text(encoding="utf-8")


def test_catalog_checks_bundled_games(capsys):
    code, out, _ = run(capsys, "catalog", "--json")
    assert code == 0
    results = json.loads(out)["results"]
    assert results["mismatched"] == []
    rows = {row["name"]: row for row in results["games"]}
    assert list(rows) == ["example"] + [f"v{k}" for k in range(1, 11)]
    assert rows["example"]["convex"] is True
    assert not any(rows[f"v{k}"]["convex"] for k in range(1, 11))
    assert all(row["core_nonempty"] and row["solver"] == ["5/2", "7/2", "2", "2"] for row in rows.values())


def test_catalog_writes_game_files(capsys, tmp_path):
    target = tmp_path / "games"
    code, out, _ = run(capsys, "catalog", "example", "v8", "--write", str(target))
    assert code == 0
    assert "FILES WRITTEN (2)" in out
    code, out, _ = run(capsys, "props", str(target / "replication_v8.game"), "--json")
    assert code == 0
    assert json.loads(out)["results"]["convex"] is False
    code, out, _ = run(capsys, "prekernel", str(target / "example.game"))
    assert "x = (5/2, 7/2, 2, 2)" in out


def test_catalog_unknown_name(capsys):
    code, _, err = run(capsys, "catalog", "v11")
    assert code == 2
    assert "unknown bundled game" in err


def test_catalog_mismatch_exits_3(capsys, monkeypatch):
    monkeypatch.setattr("tugame.modes.catalog.EXAMPLE_NUCLEOLUS", (Fraction(0),) * 4)
    code, out, _ = run(capsys, "catalog", "example")
    assert code == 3
    assert "MISMATCH" in out
