import csv
import json

import pytest

from multigeo import tiling as tl
from multigeo.cli import fmt, parse_angle, parse_complex, run
from multigeo.errors import ValidationError


def test_formatting():
    assert fmt(2) == "2.0"
    assert fmt(0.5) == "0.5"
    assert fmt(1 + 2j) == "1.0+2.0i"
    assert fmt(0.5 - 0.25j) == "0.5-0.25i"
    assert parse_complex("i") == 1j
    assert parse_complex("(1+i*sqrt(3))/2") == pytest.approx(complex(0.5, 3 ** 0.5 / 2))
    assert parse_angle("zero") is None and parse_angle("6") == 6
    with pytest.raises(ValidationError):
        parse_angle("2")


def test_mu_and_tau(capsys):
    assert run(["mu", "--tau", "i"]) == 0
    assert capsys.readouterr().out.strip() == "2.0"
    assert run(["tau", "--mu", "2"]) == 0
    assert capsys.readouterr().out.strip() == "0.0+1.0i"


def test_enumerate(capsys):
    assert run(["enumerate", "--squares", "4", "--balanced", "--orbits"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["count"] == 19 and len(out["tilings"]) == 19
    got = sorted((o["case"], o["size"], o["strata"][0]) for o in out["orbits"])
    assert got == [("A", 6, "H(1,1)"), ("B", 3, "Q(2,2)"), ("C", 4, "H(1,1)"), ("D", 6, "Q(2,2)")]
    # deterministic output
    run(["enumerate", "--squares", "4", "--balanced", "--orbits"])
    assert json.loads(capsys.readouterr().out) == out


def test_group(capsys):
    assert run(["group", "--family", "st1", "--genus", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["report"]["ok"] and out["n"] == 4


def test_group_from_tiling_file(tmp_path, capsys):
    path = tmp_path / "b.json"
    path.write_text(tl.dumps(tl.case_tiling("B")))
    assert run(["group", "--tiling", str(path), "--angle", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["flavor"] == "quadratic"


def test_domain_writes_svg_and_png(tmp_path):
    out = tmp_path / "a.svg"
    assert run(["domain", "--family", "A", "--out", str(out)]) == 0
    svg = out.read_text()
    assert 'viewBox="-1.05 -1.05 2.1 2.1"' in svg
    png = tmp_path / "a.png"
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_solve(capsys):
    assert run(["solve", "--L", "sqrt(2)", "--angle", "4"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert abs(complex(out["mu"].replace("i", "j")) - 4 / 3) < 1e-3


def test_table_writes_csv_and_png(tmp_path):
    out = tmp_path / "t.csv"
    assert run(["table", "--angle", "5", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 3 and all(r["status"] == "pass" for r in rows)
    assert (tmp_path / "t.png").exists()


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "solver.cfg"
    cfg.write_text("levels = 3\nbase = 12\n")
    assert run(["solve", "--L", "sqrt(2)", "--angle", "zero", "--config", str(cfg)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["n"] is None


def test_equation(capsys):
    assert run(["equation", "--family", "escb2", "--genus", "2", "--mu", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["integer_coefficients"] == [1, 0, 0, 0, 1, 0]


def test_fn_and_twist(capsys):
    assert run(["fn", "--family", "D"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert [e["twist"] for e in out["entries"]] == ["1/2", "0", "1/2"]
    assert run(["fn", "--family", "st1", "--genus", "2", "--twist", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert [e["twist"] for e in out["entries"]] == ["UNCOMPUTED+1/2", "UNCOMPUTED+1/2"]
    assert run(["twist", "--family", "B", "--along", "gamma"]) == 0
    assert json.loads(capsys.readouterr().out)["case"] == "A"
    assert run(["twist", "--family", "A", "--along", "phi1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert [e["twist"] for e in out["entries"]][:2] == ["1/2", "1/2"]


@pytest.mark.parametrize("argv,code", [
    (["equation", "--family", "esc1", "--genus", "2", "--mu", "2"], 2),
    (["group", "--family", "st1", "--genus", "2", "--L", "0.5"], 2),
    (["mu", "--tau", "0.01i"], 3),
    (["mu"], 2),
    (["group", "--tiling", "/nonexistent/file.json"], 2),
    (["twist", "--family", "st1", "--genus", "2", "--along", "phi1"], 2),
])
def test_exit_codes(argv, code, capsys):
    assert run(argv) == code
    assert capsys.readouterr().err
