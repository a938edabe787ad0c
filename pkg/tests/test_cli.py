import csv
import shutil
import subprocess

from invgen.cli import EXIT_CONFIG, EXIT_GATE, EXIT_OK, main

SMALL = ["--grid-L", "512", "--grid-N", "8192"]


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_console_script_help():
    exe = shutil.which("invgen")
    assert exe is not None
    res = subprocess.run([exe, "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    for cmd in ("blowup", "semigroup", "kernel", "vdc", "selftest"):
        assert cmd in res.stdout


def test_bad_arguments_exit_config(tmp_path):
    assert main(["nonsense"]) == EXIT_CONFIG
    assert main(["blowup", "--p", "x"]) == EXIT_CONFIG
    assert main(["blowup", "--rho", "1e2:1e4", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert main(["blowup", "--p", "1.5", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert main(["blowup", "--t", "1,2", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert main(["vdc", "--rho", "1e4:1e2", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert main(["kernel", "--workers", "0", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_blowup_p2(tmp_path, capsys):
    code = main(["blowup", "--p", "2", "--rho", "1e2:1e5", "--points-per-decade", "2", "--svg", "--out", str(tmp_path)])
    assert code == EXIT_OK
    rows = _rows(tmp_path / "blowup_p2.csv")
    assert rows[0] == ["rho", "p", "a", "b", "norm_fI", "norm_TmfI", "ratio", "emp_M", "flag"]
    assert len(rows) == 8
    assert all(abs(float(r[6]) - 1) < 1e-6 for r in rows[1:])
    assert _rows(tmp_path / "blowup_fit.csv")[0] == ["p", "slope", "intercept", "r_squared", "predicted_slope"]
    assert (tmp_path / "blowup.svg").read_text().startswith("<svg")
    assert "[PASS] p2-flat-ratio" in capsys.readouterr().out


def test_kernel_command(tmp_path):
    assert main(["kernel", "--out", str(tmp_path)]) == EXIT_OK
    rows = _rows(tmp_path / "kernel.csv")
    assert rows[0] == ["t", "eps", "quadrature", "exact", "abs_error"]
    assert len(rows) == 10
    assert max(float(r[4]) for r in rows[1:]) < 1e-6
    table = _rows(tmp_path / "kernel_table.csv")
    assert table[1] == ["0.5", "0", "-0.5"]


def test_vdc_command(tmp_path):
    assert main(["vdc", "--rho", "1e2:1e4", "--points-per-decade", "1", "--out", str(tmp_path)]) == EXIT_OK
    rows = _rows(tmp_path / "vdc.csv")
    assert rows[0] == ["rho", "a", "b", "curvature", "sup_G", "argmax_y", "emp_M"]
    assert len(rows) == 4
    for r in rows[1:]:
        assert float(r[4]) <= float(r[2]) - float(r[1])


def test_semigroup_window_too_small(tmp_path):
    assert main(["semigroup", "--p", "4", "--t", "1", *SMALL, "--out", str(tmp_path)]) == EXIT_CONFIG


def test_semigroup_gate_failure(tmp_path):
    # two eps values cannot push the Cauchy increment under 1e-3
    code = main(["semigroup", "--p", "2", "--t", "1", "--eps", "1,0.5", *SMALL, "--out", str(tmp_path)])
    assert code == EXIT_GATE
    rows = _rows(tmp_path / "semigroup_sweep.csv")
    assert rows[0] == ["t", "eps", "p", "ratio", "cauchy_increment"]
    assert len(rows) == 3
    agree = _rows(tmp_path / "semigroup_agreement.csv")
    assert max(float(r[3]) for r in agree[1:]) < 1e-6


def test_eps_power_syntax(tmp_path):
    code = main(["semigroup", "--p", "2", "--t", "1", "--eps", "2^0,2^-1,2^-2", *SMALL, "--out", str(tmp_path)])
    assert code in (EXIT_OK, EXIT_GATE)
    eps = [float(r[1]) for r in _rows(tmp_path / "semigroup_sweep.csv")[1:]]
    assert eps == [1.0, 0.5, 0.25]


def test_selftest(capsys):
    assert main(["selftest"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out
