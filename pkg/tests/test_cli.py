import json
from pathlib import Path

import pytest

from fanohkr import cli, families, toric

SCHEMA_PATH = Path(__file__).resolve().parents[1] / "docs" / "output-schema.json"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _check_entry(x):
    if isinstance(x, list):
        lo, hi = x
        assert isinstance(lo, int) and (hi is None or isinstance(hi, int))
    else:
        assert isinstance(x, int) and x >= 0


def check_against_schema(rec):
    schema = json.loads(SCHEMA_PATH.read_text())
    assert set(schema["required"]) <= set(rec) <= set(schema["properties"])
    assert rec["schema"] == schema["properties"]["schema"]["const"] == cli.SCHEMA
    pg = schema["properties"]["parallelogram"]
    assert list(rec["parallelogram"]) == pg["required"]
    for x in rec["parallelogram"].values():
        _check_entry(x)
    assert rec["determinacy"] in schema["properties"]["determinacy"]["enum"]
    assert rec["engine"] in schema["properties"]["engine"]["enum"]
    for step in rec.get("trace", []):
        assert isinstance(step["label"], str)
        for x in step["vector"]:
            _check_entry(x)


def layout_cells(text):
    """The free cells of the triangular layout, in the order pv01 pv11 pv02 pv12 pv22 pv03."""
    rows = {int(line.split()[0][3:]): line.split()[1:] for line in text.splitlines() if line.startswith("HH^")}
    assert rows[0] == ["1"]
    assert all(c == "0" for c in rows[5] + rows[6])
    return (rows[1][1], rows[2][1], rows[2][2], rows[3][2], rows[4][1], rows[3][3])


def test_compute_m28_layout(capsys):
    code, out, _ = run(capsys, "compute", "2-8")
    assert code == cli.EXIT_OK
    assert "HH^2" in out and "18   3" in out
    assert layout_cells(out) == ("0", "18", "3", "1", "1", "10")


def test_compute_json_round_trips(capsys):
    code, out, _ = run(capsys, "compute", "2-17", "--engine", "homogeneous", "--json", "--trace")
    assert code == cli.EXIT_OK
    rec = json.loads(out)
    check_against_schema(rec)
    assert rec["parallelogram"]["pv02"] == 5
    assert rec["determinacy"] == "Determined"
    assert rec["chi_checks"] == [True, True, True]
    assert json.loads(json.dumps(rec)) == rec


def test_missing_model_exit_code(capsys):
    code, _, err = run(capsys, "compute", "7-1", "--engine", "toric")
    assert code == cli.EXIT_NO_MODEL
    assert "7-1" in err


def test_underdetermined_exit_code_still_prints_intervals(capsys):
    code, out, _ = run(capsys, "compute", "9-1", "--engine", "toric", "--json")
    assert code == cli.EXIT_UNDERDETERMINED
    rec = json.loads(out)
    check_against_schema(rec)
    assert rec["determinacy"] == "Underdetermined"
    assert any(isinstance(x, list) for x in rec["parallelogram"].values())


def test_bad_family_id_is_input_error(capsys):
    code, _, _ = run(capsys, "compute", "two-eight")
    assert code == cli.EXIT_INPUT


def test_bwb_command(capsys):
    code, out, _ = run(capsys, "bwb", "Gr(2,5)", "O(1)")
    assert code == cli.EXIT_OK and out.split()[0].strip("(,") == "10"
    code, out, _ = run(capsys, "bwb", "Gr(2,4)xP(3)", "cotangent")
    assert out.strip() == "(0, 2, 0, 0, 0, 0, 0, 0)"
    code, _, err = run(capsys, "bwb", "Gr(2,4)", "O(1")
    assert code == cli.EXIT_INPUT and "O(1" in err


def test_toric_command(capsys, tmp_path):
    fan_file = tmp_path / "p2.fan"
    fan_file.write_text(toric.format_fan_text(toric.projective_space(2)))
    code, out, _ = run(capsys, "toric", str(fan_file), "1,1,1")
    assert code == cli.EXIT_OK and out.strip() == "(10, 0, 0)"
    code, out, _ = run(capsys, "toric", str(fan_file), "0,0,0", "--cotangent")
    assert out.strip() == "(0, 1, 0)"
    code, _, _ = run(capsys, "toric", str(fan_file), "1,1")
    assert code == cli.EXIT_INPUT


def _summary(out):
    return out.strip().splitlines()[-1]


def test_verify_all_rank_one_considers_seventeen(capsys):
    code, out, _ = run(capsys, "verify-all", "--only", "1")
    assert code == cli.EXIT_OK
    assert _summary(out).startswith("families 17:")
    assert "FAIL 0" in _summary(out)


def test_verify_all_parallel_matches_serial(capsys, tmp_path):
    report = tmp_path / "r.txt"
    _, serial, _ = run(capsys, "verify-all", "--only", "1")
    _, parallel, _ = run(capsys, "verify-all", "--only", "1", "--parallel", "2", "--report", str(report))
    assert serial == parallel
    assert report.read_text() == serial


def corrupt_m28(dataset, path):
    # moves one unit between pv02 and pv12, which keeps every Euler characteristic identity intact
    text = families.serialize(dataset).splitlines()
    i = text.index("family 2-8")
    j = next(k for k in range(i, len(text)) if text[k].startswith("expected"))
    assert text[j] == "expected 0 18 3 1 1 10"
    text[j] = "expected 0 18 4 2 1 10"
    path.write_text("\n".join(text) + "\n")


def test_verify_all_reports_exactly_one_failure_after_corruption(capsys, tmp_path, dataset):
    bad = tmp_path / "bad.dat"
    corrupt_m28(dataset, bad)
    code, out, _ = run(capsys, "--data", str(bad), "verify-all", "--only", "2")
    assert code == cli.EXIT_FAILURE
    fails = [line for line in out.splitlines() if "FAIL " in line and not line.startswith("families")]
    assert len(fails) == 1 and fails[0].split()[0] == "2-8"
    assert "FAIL 1" in _summary(out)


def test_config_file_selects_dataset(capsys, tmp_path, dataset):
    bad = tmp_path / "bad.dat"
    corrupt_m28(dataset, bad)
    cfg = tmp_path / "fanohkr.ini"
    cfg.write_text(f"[fanohkr]\ndata = {bad}\n")
    code, out, _ = run(capsys, "--config", str(cfg), "compute", "2-8", "--json")
    assert code == cli.EXIT_OK
    assert json.loads(out)["parallelogram"]["pv02"] == 3
    code, _, _ = run(capsys, "--config", str(tmp_path / "missing.ini"), "surfaces")
    assert code == cli.EXIT_INPUT


def test_invalid_dataset_is_input_error(capsys, tmp_path):
    bad = tmp_path / "bad.dat"
    bad.write_text("fanohkr-dataset 1\nfamily 2-8\nexpected 0 18 3 1 1 9\n")
    code, _, err = run(capsys, "--data", str(bad), "coverage")
    assert code == cli.EXIT_INPUT and "error" in err


def test_surfaces_and_coverage(capsys):
    code, out, _ = run(capsys, "surfaces")
    assert code == cli.EXIT_OK and len(out.strip().splitlines()) == 10
    code, out, _ = run(capsys, "coverage")
    assert code == cli.EXIT_OK and out.strip()


@pytest.mark.parametrize("argv", [["--version"], ["compute"], []])
def test_argparse_rejects_bad_usage(argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2
