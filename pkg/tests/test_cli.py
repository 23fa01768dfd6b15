import json
import subprocess
import sys

import pytest

from affineflag.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_build_plus_json(capsys):
    code, out, _ = run(capsys, "build", "plus", "-n", "2", "-q", "3", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["meta"]["order"] == 36 and data["meta"]["valency"] == 12
    assert len(data["edges"]) == 36 * 12 // 2


def test_build_is_deterministic(capsys):
    first = run(capsys, "build", "gc", "-q", "4", "--t", "3", "--e", "0", "--s", "1", "--r", "1")
    second = run(capsys, "build", "gc", "-q", "4", "--t", "3", "--e", "0", "--s", "1", "--r", "1")
    assert first == second and first[0] == 0
    lines = first[1].splitlines()
    assert lines == sorted(lines) and all(a < b for a, b in (l.split("\t") for l in lines))


def test_round_trip_through_file(tmp_path, capsys):
    path = tmp_path / "g.tsv"
    code, _, _ = run(capsys, "build", "par", "-n", "3", "-q", "2", "-o", str(path))
    assert code == 0 and path.exists()
    meta = json.loads((tmp_path / "g.tsv.meta.json").read_text())
    assert meta["family"] == "par" and meta["valency"] == 6
    code, out, _ = run(capsys, "verify", "--file", str(path), "--json")
    report = json.loads(out)
    assert code == 0 and report["ok"]
    assert report["invariants"]["order"] == 56


def test_verify_family_claims(capsys):
    code, out, _ = run(capsys, "verify", "gc", "-q", "5", "--t", "1", "--e", "0", "--s", "1", "--r", "1", "--json")
    report = json.loads(out)
    assert code == 0
    names = {c["claim"] for c in report["claims"]}
    assert "arc-transitive" in names and all(c["ok"] for c in report["claims"])


def test_verify_reports_wrong_closed_form(capsys):
    code, out, _ = run(capsys, "verify", "gc", "-q", "4", "--t", "1", "--e", "0", "--s", "2", "--r", "1", "--json")
    report = json.loads(out)
    failed = [c["claim"] for c in report["claims"] if not c["ok"]]
    assert code == 4 and failed == ["valency i q (q-1)^2/(t s)"]


def test_not_self_paired_exit(capsys):
    code, _, err = run(capsys, "build", "gc", "-q", "5", "--t", "4", "--e", "0", "--s", "1", "--r", "1")
    assert code == 3 and "self-paired" in err


def test_invalid_parameters_exit(capsys):
    assert run(capsys, "build", "plus", "-n", "2", "-q", "6")[0] == 2
    assert run(capsys, "build", "gc", "-q", "4")[0] == 2
    assert run(capsys, "census", "--p", "5", "--c", "1")[0] == 2


def test_vertex_cap_exit(capsys):
    assert run(capsys, "build", "plus", "-n", "3", "-q", "5", "--vertex-cap", "100")[0] == 5


def test_non_flag_file_rejected(tmp_path, capsys):
    bad = tmp_path / "bad.tsv"
    bad.write_text("(0,0)|<(1,0)>\t(9,9)|<(0,1)>\n")
    assert run(capsys, "verify", "--file", str(bad), "-n", "2", "-q", "3")[0] == 2
    assert run(capsys, "verify", "--file", str(tmp_path / "missing.tsv"), "-n", "2", "-q", "3")[0] == 2
    off_line = tmp_path / "off_line.tsv"
    off_line.write_text("0,0|1,1;1,0\t1,0|0,0;0,1\n")  # (0,0) is not on y = 1
    assert run(capsys, "verify", "--file", str(off_line), "-n", "2", "-q", "3")[0] == 2


def test_census(capsys):
    code, out, _ = run(capsys, "census", "--p", "5", "--c", "4", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["count"] == data["expected_count"] == 3
    assert all(all(row) for row in data["isomorphism_matrix"])


def test_standard_form(capsys):
    code, out, _ = run(capsys, "standard-form", "-q", "4", "--gen", "2,0", "--json")
    assert code == 0 and json.loads(out) == {"q": 4, "t": 1, "e": 0, "s": 2, "order": 3}
    code, out, _ = run(capsys, "standard-form", "-q", "9", "--gen", "4,1", "--json")
    # (w, 1) squares to (w^4, 0), so the subgroup is cyclic of order 4
    assert json.loads(out) == {"q": 9, "t": 4, "e": 1, "s": 1, "order": 4}


def test_standard_form_bad_generator(capsys):
    assert run(capsys, "standard-form", "-q", "4", "--gen", "0,0")[0] == 2
    assert run(capsys, "standard-form", "-q", "4", "--gen", "x")[0] == 2


def test_feasible(capsys):
    code, out, _ = run(capsys, "feasible", "--group", "AGammaL1", "-q", "4", "--d", "2", "--json")
    assert code == 0 and json.loads(out)["feasible"] is True
    code, out, _ = run(capsys, "feasible", "--group", "Translations", "-n", "2", "-q", "3", "--json")
    assert json.loads(out)["feasible"] is False


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "affineflag", "build", "skew", "-n", "2", "-q", "5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == ""
    assert json.loads(proc.stderr)["valency"] == 0
