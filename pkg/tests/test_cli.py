import json
import subprocess
import sys

import pytest

from simplexcount.cli import EXIT_CONFIG, EXIT_OK, main
from simplexcount.cuttings import random_unit_circles, spheres_to_json_obj


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_lp_example(tmp_path, capsys):
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"k": 4, "edges": []}))
    code, out, _ = _run(capsys, "lp", "--graph", str(g), "--lambda", "7,7,7,7", "--d", "7")
    assert code == EXIT_OK
    obj = json.loads(out)
    assert obj["value"] == "14/5"
    assert obj["conditions"]["admissible"] is True


def test_exponents_tables(capsys):
    code, out, _ = _run(capsys, "exponents", "--k", "4", "--d", "7")
    assert code == EXIT_OK
    assert "4:,,unit,10/3," in out
    code, out, _ = _run(capsys, "exponents", "--k", "3", "--d", "5", "--mode", "diam",
                        "--known-overrides")
    assert "3:,,diameter,2," in out


def test_lenz_then_count(tmp_path, capsys):
    pts = tmp_path / "p.json"
    side = tmp_path / "s.json"
    code, _, _ = _run(capsys, "lenz", "--d", "4", "--n", "12", "--output", str(pts),
                      "--sidecar", str(side))
    assert code == EXIT_OK and json.loads(side.read_text())["circles"] == 2
    code, out, _ = _run(capsys, "count", "--points", str(pts), "--pattern", "unit", "--k", "2")
    assert code == EXIT_OK and json.loads(out)["unordered"] == 42


def test_count_reads_stdin():
    gen = subprocess.run([sys.executable, "-m", "simplexcount", "lenz", "--d", "4", "--n", "12"],
                         capture_output=True, text=True, check=True)
    res = subprocess.run([sys.executable, "-m", "simplexcount", "count", "--pattern", "unit",
                          "--k", "2"], input=gen.stdout, capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["unordered"] == 42


def test_cutting_verify_is_deterministic(tmp_path, capsys):
    sp = tmp_path / "sp.json"
    sp.write_text(json.dumps(spheres_to_json_obj([random_unit_circles(6, 1),
                                                  random_unit_circles(6, 2)])))
    args = ("cutting", "--spheres", str(sp), "--r", "2", "--seed", "3", "--verify",
            "--points", "1000")
    code, first, _ = _run(capsys, *args)
    assert code == EXIT_OK
    assert json.loads(first)["verification"]["passed"] is True
    _, second, _ = _run(capsys, *args)
    assert first == second


def test_config_errors_exit_two(tmp_path, capsys):
    code, _, err = _run(capsys, "lp", "--graph", str(tmp_path / "nope.json"), "--lambda", "1")
    assert code == EXIT_CONFIG and "not found" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = _run(capsys, "count", "--points", str(bad), "--pattern", "unit", "--k", "2")
    assert code == EXIT_CONFIG and "malformed" in err
    code, _, _ = _run(capsys, "lenz", "--d", "3", "--n", "4")
    assert code == EXIT_CONFIG
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"k": 2, "edges": []}))
    code, _, _ = _run(capsys, "lp", "--graph", str(g), "--lambda", "a,b")
    assert code == EXIT_CONFIG
    code, _, _ = _run(capsys, "lp", "--graph", str(g), "--lambda", "2,2", "--family", "pattern")
    assert code == EXIT_CONFIG


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["exponents", "--k", "2"])
    assert info.value.code == 2


def test_verify_subset(capsys):
    code, out, _ = _run(capsys, "verify", "--only", "2,7")
    assert code == EXIT_OK
    assert out.count("[PASS]") == 2
