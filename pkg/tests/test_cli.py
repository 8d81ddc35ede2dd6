import csv
import io
import json
import math
import os
import subprocess
import sys

import pytest

from cothdelta import analysis, cli
from cothdelta.errors import NoisyConvergence

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("which,eps,name", [
    (1, None, "figure1_eps0.05.csv"),
    (2, None, "figure2_eps0.05.csv"),
    (1, "0.3", "figure1_eps0.3.csv"),
])
def test_figure_golden(capsys, which, eps, name):
    argv = ["figure", "--which", str(which)] + (["--eps", eps] if eps else [])
    code, out, _ = run(capsys, *argv)
    assert code == 0
    with open(os.path.join(GOLDEN, name), "rb") as fh:
        assert out.encode() == fh.read()


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_figure1_shape(capsys):
    _, out, _ = run(capsys, "figure", "--which", "1")
    rows = _rows(out)
    assert rows[0] == ["x", "coth_classical", "coth_eps"]
    assert len(rows) == 602
    zero = [r for r in rows[1:] if float(r[0]) == 0.0]
    assert zero == [["0", "", "0"]]


def test_figure2_peak_and_wings(capsys):
    _, out, _ = run(capsys, "figure", "--which", "2")
    rows = [(float(r[0]), r[1], float(r[2])) for r in _rows(out)[1:]]
    peak = max(rows, key=lambda r: r[2])
    assert peak[0] == 0.0 and peak[2] > 100
    assert all(r[2] < 0 for r in rows if abs(r[0]) >= 0.1)
    assert all(float(r[1]) < 0 for r in rows if r[0] != 0.0)


def test_csv_format(capsys):
    _, out, _ = run(capsys, "figure", "--which", "2", "--grid", "-1:1:5")
    assert "\r" not in out and out.endswith("\n")
    for r in _rows(out)[1:]:
        for field in r:
            if field:
                v = float(field)
                assert float("%.17g" % v) == v
                assert field == "%.17g" % v


def test_figure_json(capsys):
    code, out, _ = run(capsys, "figure", "--format", "json", "--grid", "-1:1:3")
    assert code == 0
    data = json.loads(out)
    assert data[1] == {"x": 0.0, "coth_classical": None, "coth_eps": 0.0}


def test_deterministic_output(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert cli.main(["verify", "--phi", "hermite:mu=0,sigma=1,n=2", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_default_and_json(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    data = json.loads(out, parse_constant=lambda c: pytest.fail(f"non-finite {c}"))
    assert len(data) == 4 and all(r["verdict"] and r["converged"] for r in data)


def test_verify_example(capsys):
    code, out, _ = run(capsys, "verify", "--phi", "gaussian:mu=0,sigma=1", "--tol", "1e-6")
    assert code == 0
    (rep,) = json.loads(out)
    assert rep["verdict"] is True


def test_verify_csv_quotes_specs(capsys):
    code, out, _ = run(capsys, "verify", "--phi", "gaussian:mu=0,sigma=1", "--format", "csv")
    assert code == 0
    header, row = _rows(out)
    assert len(header) == len(row)
    assert row[header.index("phi.spec")] == "gaussian:mu=0.0,sigma=1.0"


def test_exit_usage(capsys):
    assert run(capsys, "verify", "--phi", "bump:mu=0,sigma=1e-400")[0] == 2
    for argv in (
        [], ["nope"], ["figure", "--which", "3"], ["figure", "--grid", "3:-3:10"], ["figure", "--grid", "a:b"],
        ["figure", "--eps", "1.0"], ["verify", "--ratio", "1.5"], ["verify", "--count", "2"],
        ["verify", "--tol", "-1"], ["pair", "--family", "dg_eps"], ["pair", "--phi", "gaussian"],
        ["pair", "--family", "zz", "--phi", "gaussian"], ["delta", "--family", "dg_eps"],
        ["delta", "--family", "coth_eps", "--x-far", "5"], ["verify", "--abs-tol", "0"],
        ["verify", "--config", "/nonexistent/file"], ["figure", "--bogus"],
    ):
        code, _, err = run(capsys, *argv)
        assert code == 2, argv
        assert "error" in err


def test_exit_verdict(capsys):
    code, out, _ = run(capsys, "verify", "--phi", "gaussian:mu=0,sigma=1", "--route-tol", "1e-14")
    assert code == 1
    assert json.loads(out)[0]["verdict"] is False


def test_exit_nonconvergence(capsys):
    code, out, _ = run(capsys, "verify", "--phi", "gaussian:mu=3,sigma=0.5", "--tol", "1e-12")
    assert code == 3
    assert json.loads(out)[0]["converged"] is False


def test_exit_nonconvergence_from_error(capsys, monkeypatch):
    def boom(*a, **k):
        raise NoisyConvergence("differences change sign")

    monkeypatch.setattr(analysis, "pair", boom)
    code, _, err = run(capsys, "pair", "--family", "dg_eps", "--phi", "gaussian")
    assert code == 3 and "no convergence" in err


def test_help(capsys):
    assert run(capsys, "--help")[0] == 0
    assert run(capsys, "verify", "--help")[0] == 0


@pytest.mark.parametrize("fam,expected", [("coth_eps", 2.0), ("p_eps", 0.0), ("f_eps", 0.0)])
def test_delta(capsys, fam, expected):
    code, out, _ = run(capsys, "delta", "--family", fam)
    assert code == 0
    (rep,) = json.loads(out)
    assert abs(rep["delta_weight"] - expected) <= 1e-10


def test_pair_examples(capsys):
    code, out, _ = run(capsys, "pair", "--family", "dg_eps", "--phi", "gaussian:mu=0,sigma=1")
    assert code == 0
    assert abs(json.loads(out)[0]["limit"] - 2) <= 1e-8
    code, out, _ = run(capsys, "pair", "--family", "coth_eps", "--phi", "gaussian:mu=0,sigma=1")
    assert code == 0
    assert abs(json.loads(out)[0]["limit"]) <= 1e-9


def test_diffcheck(capsys):
    code, out, _ = run(capsys, "diffcheck", "--phi", "gaussian:mu=0,sigma=1")
    assert code == 0
    assert json.loads(out)[0]["verdict"] is True


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# figure settings\nwhich = 2\neps = 0.3  # wide\ngrid = -1:1:3\n")
    code, out, _ = run(capsys, "figure", "--config", str(cfg))
    assert code == 0
    rows = _rows(out)
    assert rows[0][1] == "neg_csch2" and len(rows) == 4
    # flags override the file
    code, out, _ = run(capsys, "figure", "--config", str(cfg), "--which", "1")
    assert _rows(out)[0][1] == "coth_classical"


def test_config_repeated_phi(tmp_path, capsys):
    cfg = tmp_path / "v.cfg"
    cfg.write_text("phi = gaussian:mu=0,sigma=1\nphi = bump:mu=0,sigma=3\nroute-tol = 1e-6\n")
    code, out, _ = run(capsys, "verify", "--config", str(cfg))
    assert code == 0
    assert [r["phi"]["kind"] for r in json.loads(out)] == ["gaussian", "bump"]


@pytest.mark.parametrize("text", ["colour = red\n", "which = 1\nwhich = 2\n", "which\n", "eps = abc\n",
                                  "format = xml\n", "phi = gaussian\n"])
def test_config_rejects(tmp_path, capsys, text):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text)
    assert run(capsys, "figure", "--config", str(cfg))[0] == 2


def test_out_file(tmp_path, capsys):
    p = tmp_path / "fig.csv"
    assert cli.main(["figure", "--out", str(p)]) == 0
    assert capsys.readouterr().out == ""
    with open(os.path.join(GOLDEN, "figure1_eps0.05.csv"), "rb") as fh:
        assert p.read_bytes() == fh.read()


def test_parse_grid():
    xs = cli.parse_grid("-3:3:601")
    assert len(xs) == 601 and xs[0] == -3 and xs[-1] == 3 and xs[300] == 0.0
    with pytest.raises(cli.UsageError):
        cli.parse_grid("0:1:1")
    with pytest.raises(cli.UsageError):
        cli.parse_grid("0:inf:4")


def test_json_rejects_nonfinite():
    with pytest.raises(ValueError):
        cli.records_json([{"x": math.inf}])


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "cothdelta", "figure", "--grid", "-1:1:3"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert r.stdout.splitlines()[2] == "0,,0"
