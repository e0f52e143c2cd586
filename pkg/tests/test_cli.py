import json

import pytest

from exchcumulants.cli import main
from exchcumulants.momentspec import read_table


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 0
    return json.loads(out)


# -- partitions ------------------------------------------------------------------


def test_partitions_counts(capsys):
    data = run_json(capsys, "partitions", "--n", "3")
    assert data["meta"] == {"bell": 5, "catalan": 5, "connected": 1, "filter": "all",
                            "interval": 4, "n": 3, "rows": 5}
    assert data["rows"][0][0] == "000"


def test_partitions_filters(capsys):
    assert run_json(capsys, "partitions", "--n", "4", "--filter", "noncrossing")["meta"]["rows"] == 14
    assert run_json(capsys, "partitions", "--n", "4", "--filter", "interval")["meta"]["rows"] == 8
    crossing = [r for r in run_json(capsys, "partitions", "--n", "4")["rows"] if not r[2]]
    assert [r[0] for r in crossing] == ["0101"]
    one = run_json(capsys, "partitions", "--n", "1")
    assert one["rows"] == [["0", "{{1}}", True, True, True, True, 0, 1]]


def test_partitions_csv_footer(capsys):
    code, out, _ = run(capsys, "partitions", "--n", "3", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("rgs,blocks")
    assert "# bell=5" in lines


def test_partitions_cap(capsys):
    code, _, err = run(capsys, "partitions", "--n", "5", "--cap", "4")
    assert code == 2 and "error" in err
    assert run(capsys, "partitions", "--n", "0")[0] == 2


# -- mobius ----------------------------------------------------------------------


def test_mobius_full_two(capsys):
    data = run_json(capsys, "mobius", "--n", "2")
    assert data["columns"] == ["sigma", "00", "01"]
    assert data["rows"] == [["00", 1, 0], ["01", -1, 1]]


def test_mobius_nc_and_interval(capsys):
    data = run_json(capsys, "mobius", "--lattice", "nc", "--n", "4")
    col = data["columns"].index("0000")
    row = next(r for r in data["rows"] if r[0] == "0123")
    assert row[col] == -5
    assert data["meta"]["size"] == 14
    data = run_json(capsys, "mobius", "--lattice", "interval", "--n", "4")
    assert {v for r in data["rows"] for v in r[1:]} <= {-1, 0, 1}
    assert run(capsys, "mobius", "--n", "7")[0] == 2


# -- transform -------------------------------------------------------------------


def test_transform_gaussian(capsys):
    data = run_json(capsys, "transform", "--moments", "0,1,0,3,0,15")
    assert [r[3] for r in data["rows"]] == ["0", "1", "0", "0", "0", "0"]


def test_transform_catalan_with_m0(capsys):
    data = run_json(capsys, "transform", "--moments", "1,0,1,0,2", "--m0", "--lattice", "nc")
    assert [r[3] for r in data["rows"]] == ["0", "1", "0", "0"]
    assert run(capsys, "transform", "--moments", "2,0,1", "--m0")[0] == 2


def test_transform_inverse_and_roundtrip(capsys):
    data = run_json(capsys, "transform", "--moments", "0,1,0,0", "--direction", "k2m", "--lattice", "nc")
    assert [r[3] for r in data["rows"]] == ["0", "1", "0", "2"]
    data = run_json(capsys, "transform", "--moments", "1/2,1/3,1/4", "--roundtrip", "--lattice", "interval")
    assert data["meta"]["roundtrip"] == "pass"


def test_transform_symbolic(capsys):
    data = run_json(capsys, "transform", "--symbolic", "--n", "2", "--lattice", "interval")
    assert len(data["rows"]) == 2
    table = read_table(json.dumps(data))
    assert table.rows[1][3] != 0


def test_transform_spec_file(capsys, tmp_path):
    spec = {"system": "tensor", "variables": ["x", "y"],
            "moments": [{"word": ["x"], "value": "1"}, {"word": ["y"], "value": "2"},
                        {"word": ["x", "y"], "value": "3"}]}
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    data = run_json(capsys, "transform", "--spec", str(path), "--word", "x,y")
    assert data["rows"] == [[2, "x,y", "3", "1"]]
    code, _, err = run(capsys, "transform", "--spec", str(path), "--word", "x,x")
    assert code == 2 and "missing moment" in err


def test_transform_usage_errors(capsys):
    assert run(capsys, "transform", "--moments", "1,x")[0] == 2
    assert run(capsys, "transform", "--symbolic")[0] == 2
    assert run(capsys, "transform", "--moments", "1,2", "--n", "5")[0] == 2
    assert run(capsys, "transform")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "partitions", "--n", "3", "--seed", "-1")[0] == 2
    assert run(capsys, "partitions", "--n", "3", "--jobs", "0")[0] == 2


# -- verify ----------------------------------------------------------------------


def test_verify_pretty_summary(capsys):
    code, out, _ = run(capsys, "verify", "recursion", "--system", "free", "--n", "3", "--seed", "7")
    assert code == 0
    assert out.splitlines()[-1].startswith("total:") and "0 failed (seed 7)" in out


def test_verify_json_round_trip(capsys):
    data = run_json(capsys, "verify", "good", "--n", "2-3", "--show-passed", "--system", "tensor")
    assert data["meta"]["failed"] == 0
    assert data["meta"]["passed"] == len(data["rows"]) > 0
    assert all(r[0] == "PASS" for r in data["rows"])
    again = read_table(json.dumps(data))
    assert again.rows == data["rows"]


@pytest.mark.parametrize("suite", ["product", "roundtrip", "vanishing", "degenerate"])
def test_verify_suites_pass(capsys, suite):
    code, out, _ = run(capsys, "verify", suite, "--n", "3")
    assert code == 0, out


def test_verify_bad_range(capsys):
    assert run(capsys, "verify", "good", "--n", "4-2")[0] == 2
    assert run(capsys, "verify", "good", "--n", "12", "--cap", "10")[0] == 2
