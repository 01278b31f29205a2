import json
import shutil
import subprocess
import sys

import pytest

from nervecover.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def body(text):
    return [ln for ln in text.splitlines() if not ln.startswith("#")]


def test_enumerate_counts(capsys):
    code, out, _ = call(capsys, "enumerate", "--n", "4")
    assert code == 0
    assert len(body(out)) == 1 + 168
    assert out.startswith("# nervecover ")


def test_stevens_grid(capsys):
    code, out, _ = call(capsys, "stevens", "--n", "3", "--alpha-grid", "0.2:0.45:0.05")
    rows = body(out)
    assert code == 0 and len(rows) == 1 + 6
    assert rows[5].split(",")[:3] == ["0.4", "3", "0.04"]


def test_coverage_all(capsys):
    code, out, _ = call(capsys, "coverage", "--graph", "circle", "--n", "3", "--eps", "0.2",
                        "--mode", "all", "--trials", "1e5", "--seed", "7")
    assert code == 0
    rows = {r.split(",")[0]: r.split(",") for r in body(out)[1:]}
    assert float(rows["exact-pipeline"][1]) == 0.04
    assert float(rows["stevens"][1]) == 0.04
    for m in ("mc-pipeline", "mc-oracle"):
        p, se = float(rows[m][1]), float(rows[m][2])
        assert abs(p - 0.04) < 3 * se


def test_no_wall_time_is_byte_identical(capsys, tmp_path):
    argv = ["mc", "--graph", "theta", "--n", "3", "--eps", "0.3", "--trials", "5000",
            "--seed", "3", "--no-wall-time"]
    a = call(capsys, *argv, "--out", str(tmp_path / "a.csv"))
    b = call(capsys, *argv, "--out", str(tmp_path / "b.csv"))
    assert a[0] == b[0] == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert b"wall_time" not in (tmp_path / "a.csv").read_bytes()


def test_wall_time_header(capsys):
    _, out, _ = call(capsys, "enumerate", "--n", "1")
    assert "# wall_time_s=" in out


def test_graph_file(capsys, fixtures):
    code, out, _ = call(capsys, "coverage", "--graph", str(fixtures / "interval.graph"),
                        "--n", "3", "--eps", "0.2", "--mode", "oracle", "--trials", "2000")
    assert code == 0 and body(out)[1].startswith("mc-oracle")


@pytest.mark.parametrize("argv,exit_code", [
    (["enumerate", "--n", "9"], 1),
    (["stevens", "--n", "3"], 1),
    (["coverage", "--graph", "circle", "--n", "3", "--eps", "0.3", "--mode", "mc"], 1),
    (["coverage", "--graph", "circle", "--n", "3", "--eps", "-1"], 1),
    (["mc", "--graph", "circle", "--n", "3", "--eps", "0.1", "--trials", "1.5"], 1),
    (["bound", "--graph", "circle", "--n", "3", "--mu0", "-1"], 1),
    (["nosuchcommand"], 1),
    (["coverage", "--graph", "missing.graph", "--n", "3", "--eps", "0.1"], 3),
])
def test_exit_codes(capsys, argv, exit_code):
    code, _, err = call(capsys, *argv)
    assert code == exit_code
    rec = json.loads(err.strip().splitlines()[-1])
    assert rec["exit_code"] == exit_code


def test_bad_graph_reports_line(capsys, fixtures):
    code, _, err = call(capsys, "realize", "--graph", str(fixtures / "bad_length.graph"),
                        "--n", "2", "--eps", "0.1")
    assert code == 1 and "line 3" in json.loads(err)["message"]


def test_unwritable_output(capsys, tmp_path):
    code, _, _ = call(capsys, "enumerate", "--n", "1", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == 3


def test_other_commands(capsys, tmp_path):
    assert call(capsys, "coeffs", "--invariant", "chi_rel", "--n", "2", "--k", "2")[0] == 0
    code, out, _ = call(capsys, "coeffs", "--n", "3", "--k", "3")
    assert code == 0 and "1+2+3+12+13+23+123,3,1" in out
    code, out, _ = call(capsys, "chi-dist", "--n", "3", "--alpha", "0.2", "--no-wall-time")
    assert body(out)[1:] == ["0,0.0,0.0", "1,0.24,0.24", "2,0.6,0.6", "3,0.16,0.16"]
    code, out, _ = call(capsys, "bound", "--graph", "circle", "--n", "3", "--alpha", "0.2")
    assert code == 0 and body(out)[1].startswith("3,1.92,1.92,0,0.857")
    code, out, _ = call(capsys, "bound", "--graph", "ytree", "--n", "3", "--mu0", "1.5")
    assert body(out)[1].startswith("3,-0.5,1.5,-2,")
    code, out, _ = call(capsys, "realize", "--graph", "ytree", "--n", "3", "--eps", "0.1")
    assert code == 0 and body(out)[0] == "ball,edge,interval_start,interval_end"


def test_p_file_roundtrip(capsys, tmp_path):
    _, out, _ = call(capsys, "mc", "--graph", "circle", "--n", "3", "--eps", "0.2",
                     "--trials", "20000", "--seed", "1")
    f = tmp_path / "atomic.csv"
    f.write_text("\n".join(",".join(r.split(",")[::3]) for r in body(out)))
    code, out2, _ = call(capsys, "coverage", "--graph", "circle", "--n", "3", "--eps", "0.2",
                         "--mode", "exact", "--p-file", str(f), "--form", "atomic")
    assert code == 0
    assert abs(float(body(out2)[1].split(",")[1]) - 0.04) < 0.01


@pytest.mark.skipif(shutil.which("nervecover") is None, reason="console script not installed")
def test_console_script():
    p = subprocess.run(["nervecover", "enumerate", "--n", "2"], capture_output=True, text=True)
    assert p.returncode == 0 and len(body(p.stdout)) == 7


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "nervecover", "stevens", "--n", "2",
                        "--alpha", "0.5"], capture_output=True, text=True)
    assert p.returncode == 0
