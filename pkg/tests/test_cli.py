import csv
import io
import json
import subprocess
import sys

import pytest

from classpower.cli import main

S3_DOC = {"name": "S3file", "degree": 3, "generators": [[1, 2, 0], [1, 0, 2]]}


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_catalogue_json(capsys):
    code, out, err = run(["analyze", "--group", "catalogue:A4", "--max-n", "3"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data[0]["group"] == "A4" and data[0]["summary"]["pairs"] == 6
    assert data[0]["summary"]["hits"]["TrivialPlusClass"] >= 1
    assert "A4:" in err


def test_json_is_byte_identical(capsys):
    argv = ["analyze", "--group", "catalogue:SL(2,3)", "--max-n", "4"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second


def test_group_file_and_out(tmp_path, capsys):
    path = tmp_path / "s3.json"
    path.write_text(json.dumps(S3_DOC))
    out = tmp_path / "report.csv"
    code, stdout, _ = run(["analyze", "--group", str(path), "--format", "csv", "--out", str(out)], capsys)
    assert code == 0 and stdout == ""
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len(rows) == 2 * 7
    assert {r["agreement"] for r in rows} == {"true"}


def test_text_and_only_filters(capsys):
    code, out, _ = run(["analyze", "--group", "catalogue:M16", "--format", "text", "--only", "hits"], capsys)
    assert code == 0 and out.startswith("M16 (order 16)")
    code, out, _ = run(["analyze", "--group", "catalogue:M16", "--only", "findings"], capsys)
    assert json.loads(out)[0]["reports"] == []
    code, out, _ = run(["analyze", "--group", "catalogue:M16", "--only", "conjectures"], capsys)
    block = json.loads(out)[0]
    assert "reports" not in block and "census" in block


def test_analyze_table(capsys):
    code, out, err = run(["analyze", "--table", "fixtures/M11.json"], capsys)
    assert code == 0
    s = json.loads(out)[0]["summary"]
    assert s["pairs"] == 45 and s["hits"] == {}


def test_trivial_group_is_empty(capsys):
    code, out, _ = run(["analyze", "--group", "catalogue:Z1"], capsys)
    assert code == 0 and json.loads(out)[0]["reports"] == []


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "--group", "catalogue:Nope"],
        ["analyze", "--group", "catalogue:A4", "--max-n", "17"],
        ["analyze", "--group", "catalogue:A4", "--tolerance", "0.1"],
        ["analyze", "--group", "/no/such/file.json"],
        ["analyze"],
        ["frobnicate"],
        ["analyze", "--group", "catalogue:M11"],
    ],
)
def test_operational_errors_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as info:
        code = main(argv)
        raise SystemExit(code)
    assert info.value.code == 1


def test_chartable_round_trip(tmp_path, capsys):
    out = tmp_path / "a4.json"
    code, _, _ = run(["chartable", "--group", "catalogue:A4", "--out", str(out)], capsys)
    assert code == 0
    code, _, err = run(["chartable", "--group", "catalogue:A4", "--verify-against", str(out)], capsys)
    assert code == 0


def test_chartable_verify_mismatch_exits_2(tmp_path, capsys):
    out = tmp_path / "s4.json"
    run(["chartable", "--group", "catalogue:S4", "--out", str(out)], capsys)
    code, _, _ = run(["chartable", "--group", "catalogue:A4", "--verify-against", str(out)], capsys)
    assert code == 2


def test_corrupted_table_exits_2(tmp_path, capsys):
    out = tmp_path / "a4.json"
    run(["chartable", "--group", "catalogue:A4", "--out", str(out)], capsys)
    data = json.loads(out.read_text())
    data["irreducibles"][3][1] = [5.0, 0.0]
    out.write_text(json.dumps(data))
    code, _, err = run(["analyze", "--table", str(out)], capsys)
    assert code == 2 and "validation" in err
    code, _, _ = run(["chartable", "--group", "catalogue:A4", "--verify-against", str(out)], capsys)
    assert code == 2


def test_suite_clean(capsys):
    code, out, err = run(["suite", "--max-n", "3", "--format", "text"], capsys)
    assert code == 0
    assert "clean" in err


def test_suite_bad_fixture_exits_2(tmp_path, capsys):
    bad = dict(S3_DOC, name="BadS3", expected_facts=[{"name": "order", "expected": 7}])
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, out, err = run(["suite", "--max-n", "2", "--group", str(path)], capsys)
    assert code == 2 and "BadS3" in err
    blocks = json.loads(out)
    assert any(b["group"] == "BadS3" and "error" in b for b in blocks)


def test_suite_property_block(capsys):
    code, out, _ = run(["suite", "--max-n", "3", "--only", "findings"], capsys)
    blocks = {b["group"]: b for b in json.loads(out)}
    assert code == 0
    assert not any(blocks["S4"]["property_violations"].values())
    assert blocks["Z6"]["corollary_c3"]


def test_console_script_version():
    res = subprocess.run([sys.executable, "-m", "classpower.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "classpower" in res.stdout
