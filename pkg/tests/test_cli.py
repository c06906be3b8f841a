import json

import pytest

from seshadri.cli import main
from seshadri.models import f1_anticanonical, quadric


@pytest.fixture
def f1_path(tmp_path):
    path = tmp_path / "f1.json"
    path.write_text(f1_anticanonical().to_json())
    return str(path)


@pytest.fixture
def family_path(tmp_path):
    (tmp_path / "f1.json").write_text(f1_anticanonical().to_json())
    doc = {
        "degree": 8,
        "members": [
            {"param_label": "t0", "model": "f1.json"},
            {"param_label": "t1", "model": json.loads(quadric(2, 2).to_json())},
        ],
    }
    path = tmp_path / "family.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_bound_text(capsys):
    assert main(["bound", "--d", "4", "--c", "0", "--c-prime", "2", "--a", "3/2"]) == 0
    out = capsys.readouterr().out
    assert "M = 4" in out and "B = 16" in out and "multiplicity target = 7" in out


def test_bound_json(capsys):
    assert main(
        ["bound", "--d", "4", "--c", "0", "--c-prime", "2", "--a", "3/2", "--format", "json"]
    ) == 0
    doc = json.loads(capsys.readouterr().out)
    assert (doc["M"], doc["B"], doc["multiplicity_target"]) == (4, 16, 7)
    assert doc["tool_version"] and doc["schema_version"] == 1


def test_bound_rejects_decimal(capsys):
    assert main(["bound", "--d", "4", "--c", "0", "--c-prime", "2", "--a", "1.5"]) == 1
    assert "error" in capsys.readouterr().err


def test_candidates_text(capsys):
    assert main(["candidates", "--B", "3", "--alpha", "3/2"]) == 0
    assert capsys.readouterr().out.strip() == "1, 3/2"


def test_candidates_permissive_labeled(capsys):
    assert main(["candidates", "--B", "3", "--alpha", "3", "--permissive"]) == 0
    assert "not a certified superset" in capsys.readouterr().out


def test_epsilon_stratum(capsys, f1_path):
    assert main(["epsilon", f1_path, "--stratum", "on_E", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["value"] == "1"
    assert doc["witness"]["label"] == "E"


def test_epsilon_global(capsys, f1_path):
    assert main(["epsilon", f1_path, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["value"] == "1" and doc["attained_at"] == "on_E"


def test_epsilon_unknown_stratum(capsys, f1_path):
    assert main(["epsilon", f1_path, "--stratum", "nope"]) == 1


def test_epsilon_strict_on_uncertified(capsys, tmp_path, f1_path):
    doc = json.loads(f1_anticanonical().to_json())
    for sd in doc["strata"]:
        sd["oracle_complete_below"] = None
    path = tmp_path / "uncertified.json"
    path.write_text(json.dumps(doc))
    assert main(["epsilon", str(path), "--strict"]) == 2
    assert main(["epsilon", str(path)]) == 0


def test_sublevel(capsys, f1_path):
    assert main(["sublevel", f1_path, "--a", "1", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["strata"] == ["on_E"]
    assert doc["closed_under_specialization"]


def test_scan_with_csv(capsys, tmp_path, family_path):
    csv_path = tmp_path / "out.csv"
    assert main(["scan", family_path, "--alpha", "5/2", "--csv", str(csv_path)]) == 0
    out = capsys.readouterr().out
    assert "sigma(family) = 2" in out
    assert "observed values <= 5/2: 1, 2" in out
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "param_label,stratum,epsilon,certification,witness"
    assert len(lines) == 4


def test_scan_json_report(capsys, family_path):
    assert main(["scan", family_path, "--alpha", "5/2", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["sigma_cap"] == ["1", "2"]
    assert doc["sigma_family"] == "2"


def test_output_written_atomically(tmp_path, f1_path):
    out = tmp_path / "report.json"
    assert main(["epsilon", f1_path, "--format", "json", "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["value"] == "1"
    leftovers = [p for p in tmp_path.iterdir() if p.name.startswith(".seshadri-")]
    assert leftovers == []


def test_check_passes_and_is_deterministic(capsys):
    assert main(["check"]) == 0
    first = capsys.readouterr().out
    assert main(["check"]) == 0
    second = capsys.readouterr().out
    assert first == second
    assert all(line.startswith("PASS") for line in first.strip().splitlines())


def test_missing_file_is_input_error(capsys):
    assert main(["epsilon", "/nonexistent/model.json"]) == 1
