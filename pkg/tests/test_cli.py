import json
import math
import subprocess
import sys

import pytest

from expcond.cli import main


@pytest.fixture
def write(tmp_path):
    def _write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if code == 0 else None), out.err, out.out


SQUARE = {"ambient_dim": 2, "vertices": [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"]]}


def test_index_of_exp_minus_one(capsys):
    code, rep, err, _ = run(capsys, "index", "--expr", "exp(z1) - 1")
    assert code == 0
    assert rep["results"]["exact"] == "1/(2π)"
    assert rep["results"]["value"] == pytest.approx(0.159154, abs=1e-6)
    assert rep["results"]["error_bound"] == 0
    assert rep["seed"] == 0 and rep["command"][:2] == ["expcond", "index"]
    assert "index =" in err


def test_index_vanishing_certificate(capsys):
    code, rep, _, _ = run(capsys, "index", "--n", "2", "--expr", "exp(z1) - 1", "--expr", "exp(i*z1) + 3")
    assert code == 0
    assert rep["results"]["value"] == 0 and rep["results"]["complex_rank"] == -1
    assert "vanishing_certificate" in rep["results"]


def test_index_from_json_file(capsys, write):
    f = write("f.json", {"terms": [{"coeff": ["1", "0"], "exp": [["1", "0"]]},
                                  {"coeff": ["-1", "0"], "exp": [["0", "0"]]}]})
    code, rep, _, _ = run(capsys, "index", f)
    assert code == 0 and rep["results"]["exact"] == "1/(2π)"


def test_fan_multiply_of_square_fans(capsys, write):
    sq = write("sq.json", SQUARE)
    code, rep, _, _ = run(capsys, "fan", "dual", sq, "--dim", "1")
    assert code == 0
    fan = write("fan.json", rep["results"]["fan"])
    code, rep, _, _ = run(capsys, "fan", "multiply", fan, fan)
    assert code == 0
    assert rep["results"]["zero_cone_weight"] == "1"
    code, rep, _, _ = run(capsys, "fan", "equiv", fan, fan)
    assert rep["results"]["equivalent"] is True
    code, rep, _, _ = run(capsys, "fan", "add", fan, fan)
    assert {c["weight"] for c in rep["results"]["fan"]["cones"]} == {"2"}


def test_fan_of_element(capsys, write):
    elem = write("x.json", {"ambient_dim": 2, "terms": [{"degree": 1, "coeff": "1", "plus": SQUARE}]})
    code, rep, _, _ = run(capsys, "fan", "of-element", elem)
    assert code == 0 and len(rep["results"]["fan"]["cones"]) == 4
    spaced = write("y.json", {"space": {"ambient_dim": 2}, "terms": [{"degree": 2, "coeff": "1", "plus": SQUARE}]})
    code, rep, _, _ = run(capsys, "fan", "of-element", spaced)
    assert rep["results"]["fan"]["dim"] == 0


def test_rank_complex(capsys, write):
    pair = write("pair.json", [
        {"ambient_dim": 4, "vertices": [["0", "0", "0", "0"], ["1", "0", "0", "0"]]},
        {"ambient_dim": 4, "vertices": [["0", "0", "0", "0"], ["0", "1", "0", "0"]]},
    ])
    code, rep, _, _ = run(capsys, "rank", pair, "--complex")
    assert code == 0 and rep["results"]["rank"] == -1
    code, rep, _, _ = run(capsys, "rank", pair)
    assert rep["results"]["rank"] == 0


def test_mixed_volume_and_pseudovolume(capsys, write):
    segs = write("segs.json", [
        {"ambient_dim": 2, "vertices": [["0", "0"], ["1", "0"]]},
        {"ambient_dim": 2, "vertices": [["0", "0"], ["0", "1"]]},
    ])
    code, rep, _, _ = run(capsys, "mixed-volume", segs)
    assert code == 0 and rep["results"]["exact"] == "1/2" and rep["results"]["error_bound"] == 0
    tri = write("tri.json", {"ambient_dim": 2, "vertices": [["0", "0"], ["1", "0"], ["0", "1"]]})
    code, rep, _, _ = run(capsys, "pseudovolume", tri)
    assert rep["results"]["value"] == pytest.approx((2 + math.sqrt(2)) / (4 * math.pi))
    assert rep["results"]["error_bound"] == 0
    code, rep, _, _ = run(capsys, "pseudovolume", tri, "--polarized")
    assert rep["results"]["mode"] == "polarized"


def test_oracles(capsys):
    code, rep, _, _ = run(capsys, "oracle", "zeros-disk", "--expr", "exp(2*pi*i*z1) - 1", "--radius", "10.5")
    assert code == 0 and rep["results"]["count"] == 21
    code, rep, _, _ = run(capsys, "oracle", "lattice-density", "--lambdas", '[["1", "0"]]')
    assert code == 0
    assert rep["results"]["density"] == pytest.approx(1 / (2 * math.pi))
    assert rep["results"]["exponential_identity_holds"] is True


def test_reports_are_byte_identical(capsys, write):
    P = write("p.json", {"ambient_dim": 6, "vertices": [
        ["0", "0", "0", "0", "0", "0"], ["1", "0", "0", "0", "0", "0"], ["0", "1", "0", "0", "0", "0"],
        ["0", "0", "1", "0", "0", "0"], ["0", "0", "0", "1", "0", "0"], ["0", "0", "0", "0", "1", "0"],
        ["0", "0", "0", "0", "0", "1"]]})
    outs = [run(capsys, "pseudovolume", P, "--angle-samples", "2000", "--seed", "7")[3] for _ in range(2)]
    assert outs[0] == outs[1]
    rep = json.loads(outs[0])
    assert rep["samples"] == 2000 and rep["seed"] == 7 and rep["results"]["error_bound"] > 0
    other = run(capsys, "pseudovolume", P, "--angle-samples", "2000", "--seed", "8")[3]
    assert other != outs[0]


def test_angle_samples_from_environment(capsys, write, monkeypatch):
    monkeypatch.setenv("EXPCOND_ANGLE_SAMPLES", "1234")
    P = write("sq.json", SQUARE)
    code, rep, _, _ = run(capsys, "pseudovolume", P)
    assert rep["samples"] == 1234


def test_timing_is_opt_in(capsys, write):
    P = write("sq.json", SQUARE)
    assert "wall_time" not in run(capsys, "rank", P)[1]
    assert run(capsys, "rank", P, "--timing")[1]["wall_time"] >= 0


@pytest.mark.parametrize("argv", [
    ["index", "--expr", "exp(z1) +* 1"],
    ["index"],
    ["rank", "/nonexistent/file.json"],
    ["oracle", "lattice-density", "--lambdas", '[["1", "0", "0", "0"], ["0", "1", "0", "0"]]'],
    ["oracle", "lattice-density", "--lambdas", "not json"],
    ["pseudovolume", "--angle-samples", "0", "-"],
])
def test_input_errors_exit_2(capsys, argv, monkeypatch):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(SQUARE)))
    code, _, err, out = run(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("error:")


def test_bad_json_file_exits_2(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(capsys, "mixed-volume", str(p))[0] == 2
    p.write_text(json.dumps({"ambient_dim": 2, "vertices": [[0.5, 0]]}))
    assert run(capsys, "mixed-volume", str(p))[0] == 2


def test_unstable_product_exits_3(capsys, write):
    a = write("a.json", {"ambient_dim": 2, "dim": 1, "cones": [{"generators": [["1", "0"]], "weight": "1"}]})
    b = write("b.json", {"ambient_dim": 2, "dim": 1, "cones": [{"generators": [["0", "1"]], "weight": "1"}]})
    # a single ray is not balanced; seed 4 draws shifts on both sides of it
    code, _, err, _ = run(capsys, "fan", "multiply", a, b, "--seed", "4")
    assert code == 3 and err.startswith("certification failed")


def test_module_entry_point(tmp_path):
    p = tmp_path / "sq.json"
    p.write_text(json.dumps(SQUARE))
    out = subprocess.run([sys.executable, "-m", "expcond", "rank", str(p)], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["results"]["rank"] == 1
