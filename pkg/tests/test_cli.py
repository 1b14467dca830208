import json

import pandas as pd

from src.cli import build_parser, run


def test_help_exits_cleanly():
    assert run(["--help"]) == 0
    assert build_parser().parse_args(["verify", "euler", "--n", "3"]).check == "euler"


def test_usage_errors():
    assert run(["census", "--n", "3", "--x", "2", "--bogus"]) == 2
    assert run(["census", "--n", "3"]) == 2
    assert run(["constants", "--n", "3"]) == 2
    assert run(["verify", "jacobian", "--n", "3"]) == 2
    assert run(["local-density", "--n", "3", "--p", "3", "--f", "0,9"]) == 2
    assert run(["local-density", "--n", "3", "--p", "3", "--f", "a,b,c"]) == 2


def test_verify_euler_writes_outputs(tmp_path):
    csv_path = tmp_path / "euler.csv"
    out = tmp_path / "euler.json"
    assert run(["verify", "euler", "--n", "5", "--csv", str(csv_path), "--out", str(out)]) == 0
    frame = pd.read_csv(csv_path)
    assert len(frame) == 25
    assert frame["equal"].all()
    assert json.loads(out.read_text())["status"] == "success"


def test_verify_jacobian(tmp_path):
    out = tmp_path / "jac.json"
    assert run(["verify", "jacobian", "--n", "3", "--p", "3", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["status"] == "success"
    assert data["measured"] == data["expected"]


def test_local_density(tmp_path):
    out = tmp_path / "local.json"
    assert run(["local-density", "--n", "3", "--p", "3", "--f", "0,9,0", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["c_p"] == 3
    assert data["full_integral"] == "3/4"


def test_reduce_over_integers(tmp_path):
    out = tmp_path / "reduce.json"
    matrix = "[[0, 1, 2], [1, 4, 1], [2, 1, 3]]"
    assert run(["reduce", "--matrix", matrix, "--ring", "Z", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["status"] == "success"
    assert run(["reduce", "--matrix", "[[0, 1", "--ring", "Z"]) == 2


def test_reduce_accepts_symmatrix_json(tmp_path):
    rows_out = tmp_path / "rows.json"
    sym_out = tmp_path / "sym.json"
    entries = [[1, 1, "0"], [1, 2, "1"], [1, 3, "2"], [2, 2, "4"], [2, 3, "1"], [3, 3, "3"]]
    source = tmp_path / "matrix.json"
    source.write_text(json.dumps({"n": 3, "ring": "ZZ", "entries": entries}))
    assert run(["reduce", "--matrix", "[[0, 1, 2], [1, 4, 1], [2, 1, 3]]", "--ring", "Z", "--out", str(rows_out)]) == 0
    assert run(["reduce", "--matrix", str(source), "--ring", "Z", "--out", str(sym_out)]) == 0
    assert json.loads(sym_out.read_text()) == json.loads(rows_out.read_text())
    assert run(["reduce", "--matrix", '{"n": 3, "ring": "ZZ"}', "--ring", "Z"]) == 2


def test_census_with_cross_check(tmp_path):
    out = tmp_path / "census.json"
    csv_path = tmp_path / "census.csv"
    argv = ["census", "--n", "3", "--x", "2", "--no-predict", "--cross-check", "--threads", "1",
            "--out", str(out), "--csv", str(csv_path)]
    assert run(argv) == 0
    data = json.loads(out.read_text())
    assert data["cross_checks"][0]["status"] == "success"
    assert data["reports"][0]["empirical"] == data["cross_checks"][0]["direct"]
    assert len(pd.read_csv(csv_path)) == 1


def test_census_rejects_large_degree():
    assert run(["census", "--n", "6", "--x", "2", "--no-predict", "--threads", "1"]) == 1
