import csv
import io
import json

import pytest

from hkmono.cli import main


def run(capsys, monkeypatch, argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin if isinstance(stdin, str) else json.dumps(stdin)))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def as_json(capsys, monkeypatch, argv, stdin=None):
    code, out, err = run(capsys, monkeypatch, argv + ["--format", "json"], stdin)
    assert code == 0, err
    return json.loads(out)


TYPE2 = {"normal_form": {"type": "II", "b2": 7}}


def test_nu(capsys, monkeypatch):
    rep = as_json(capsys, monkeypatch, ["nu"], TYPE2)
    assert rep["meta"] == {"nu": 1, "dim": 7}
    assert rep["input"] == TYPE2
    assert {r["i"]: r["gr_dim"] for r in rep["rows"]} == {-1: 2, 0: 3, 1: 2}


def test_nu_matrix_with_form(capsys, monkeypatch):
    data = {"matrix": [[0, 0, 0, 0], [0, 0, 0, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], "bbf": {"r": 2}}
    rep = as_json(capsys, monkeypatch, ["nu"], data)
    assert rep["meta"]["nu"] == 1


def test_filtration(capsys, monkeypatch):
    rep = as_json(capsys, monkeypatch, ["filtration"], {"normal_form": {"type": "III", "b2": 5}})
    assert rep["meta"]["nu"] == 2 and rep["meta"]["cocharacter"] == [2, 0]
    dims = {r["i"]: r["dim"] for r in rep["rows"]}
    assert [dims[i] for i in range(-2, 3)] == [1, 1, 4, 4, 5]
    assert dims.get(-3, 0) == 0


def test_normal_form(capsys, monkeypatch):
    rep = as_json(capsys, monkeypatch, ["normal-form", "--type", "III", "--b2", "4", "--primitive"])
    assert rep["meta"]["nu"] == 2 and len(rep["meta"]["matrix"]) == 3


def test_clifford_check(capsys, monkeypatch):
    rep = as_json(capsys, monkeypatch, ["clifford-check", "--m", "5"])
    assert rep["meta"]["spin_dim"] == 4 and rep["meta"]["commutant_is_left_multiplications"]


def test_verify_range_with_jobs(capsys, monkeypatch):
    one = run(capsys, monkeypatch, ["verify-thm52", "--range", "4..24", "--format", "csv"])
    par = run(capsys, monkeypatch, ["--jobs", "3", "verify-thm52", "--range", "4..24", "--format", "csv"])
    assert one[0] == par[0] == 0 and one[1] == par[1]
    rows = list(csv.DictReader(io.StringIO(one[1])))
    assert len(rows) == 2 + 3 * 20
    assert {r["case"] for r in rows if r["b2"] == "4"} == {"a", "c"}


def test_weyl_max(capsys, monkeypatch):
    rep = as_json(capsys, monkeypatch, ["weyl-max", "--family", "D", "--weight", "1/2,1/2,-1/2", "--h", "1,1,1"])
    assert rep["meta"]["max"] == "1/2"


def test_branch(capsys, monkeypatch):
    rep = as_json(capsys, monkeypatch, ["branch", "--family", "B", "--mu", "1,0,0"])
    assert rep["meta"]["dim"] == 7
    assert sorted((r["grade"], r["weight"]) for r in rep["rows"]) == [
        ("-1", ["0", "0"]), ("0", ["1", "0"]), ("1", ["0", "0"])]


def test_criterion(capsys, monkeypatch):
    d = {"n": 2, "b2": 6, "components": [{"mu": [2, 0, 0, 0]}, {"mu": [1, 1, 0, 0]}]}
    rep = as_json(capsys, monkeypatch, ["criterion"], d)
    assert rep["meta"] == {"condition1": True, "condition2": True, "agree": True}


@pytest.mark.parametrize("t,expected", [
    ("II", [0, 1, 2, 3, 2, 1, 0]),
    ("III", [0, 2, 4, 6, 4, 2, 0]),
    ("I", [0] * 7),
])
def test_predict_tables(capsys, monkeypatch, t, expected):
    rep = as_json(capsys, monkeypatch, ["predict", "--type", t, "--deformation", "OG6"])
    assert [r["nu"] for r in rep["rows"]] == expected
    assert rep["meta"]["violations"] == []


def test_predict_odd(capsys, monkeypatch):
    rep = as_json(capsys, monkeypatch, ["predict", "--type", "III", "--odd", "--deformation", "Kumn", "--n", "3"])
    assert {r["degree"]: r["nu"] for r in rep["rows"]}[5] == 3


def test_llv_toy(capsys, monkeypatch):
    rep = as_json(capsys, monkeypatch, ["llv-toy", "--b2", "4"])
    assert rep["meta"]["generated_dim"] == 15 and rep["meta"]["inside_so"]


@pytest.mark.parametrize("fmt", ["json", "markdown", "csv"])
def test_formats_deterministic(capsys, monkeypatch, tmp_path, fmt):
    outs = []
    for i in range(2):
        path = tmp_path / f"out{i}"
        code, _, _ = run(capsys, monkeypatch, ["nu", "--format", fmt, "--output", str(path)], TYPE2)
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] and outs[0]
    if fmt == "markdown":
        assert outs[0].startswith(b"## nilpotency index")


def test_input_file(capsys, monkeypatch, tmp_path):
    p = tmp_path / "in.json"
    p.write_text(json.dumps(TYPE2))
    assert as_json(capsys, monkeypatch, ["nu", "--input", str(p)])["meta"]["nu"] == 1


def test_exit_codes(capsys, monkeypatch):
    assert run(capsys, monkeypatch, ["nu"], {"matrix": [[1, 0], [0, 1]]})[0] == 1
    assert run(capsys, monkeypatch, ["nu"], "not json")[0] == 2
    assert run(capsys, monkeypatch, ["weyl-max", "--family", "B", "--weight", "1,x", "--h", "1,0"])[0] == 2
    assert run(capsys, monkeypatch, ["verify-thm52", "--b2", "3"])[0] == 1
    bad = {"n": 2, "b2": 6, "components": [{"mu": [1, 1, 0, 0]}]}
    assert run(capsys, monkeypatch, ["criterion"], bad)[0] == 1
    assert run(capsys, monkeypatch, ["predict", "--type", "II", "--deformation", "nope"])[0] == 2
    assert run(capsys, monkeypatch, ["frobnicate"])[0] == 2
