import json
import math
import subprocess
import sys

import numpy as np
import pytest

from levicav import figures
from levicav.cli import main
from levicav.io import read_table


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_trap_json(capsys):
    code, out = run(capsys, "trap", "--json")
    assert code == 0
    data = json.loads(out.out)
    assert 1 <= data["omega_m_over_2pi_MHz"] <= 10


def test_trap_by_frequency(capsys):
    code, out = run(capsys, "trap", "--freq-MHz", "0.5", "--json")
    assert json.loads(out.out)["omega_m_over_2pi_MHz"] == pytest.approx(0.5)


def test_noise_text(capsys):
    code, out = run(capsys, "noise")
    assert code == 0 and "dominant = recoil" in out.out


@pytest.mark.parametrize("argv", [["cool"], ["epr"], ["squeeze"], ["mie"], ["thermal"], ["epr", "--numeric"]])
def test_calculators_run(capsys, argv):
    code, out = run(capsys, *argv, "--json")
    assert code == 0
    assert json.loads(out.out)


def test_squeeze_defaults(capsys):
    _, out = run(capsys, "squeeze", "--json")
    assert json.loads(out.out)["lossy_dB"] == pytest.approx(14.5, abs=0.5)


def test_invalid_input_exits_2(capsys):
    code, out = run(capsys, "trap", "--radius-nm", "-5")
    assert code == 2 and "invalid input" in out.err


def test_missing_config_exits_2(capsys, tmp_path):
    code, out = run(capsys, "sweep", str(tmp_path / "nope.ini"))
    assert code == 2 and "config error" in out.err


def test_unknown_key_exits_2(capsys, tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[run]\nevaluate = trap\n[sphere]\nradius = 5\n")
    code, out = run(capsys, "sweep", str(cfg))
    assert code == 2
    assert f"{cfg}:4" in out.err


def test_sweep_uses_env_output_dir(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "scan.ini"
    cfg.write_text("[run]\nevaluate = trap\noutput = scan.csv\n[sweep]\nsphere.radius_nm = 10, 20\n")
    monkeypatch.setenv("LEVICAV_OUTPUT_DIR", str(tmp_path / "out"))
    code, out = run(capsys, "sweep", str(cfg))
    assert code == 0
    _, cols, rows = read_table(tmp_path / "out" / "scan.csv")
    assert len(rows) == 2 and cols[0] == "sphere.radius_nm"


def test_sweep_byte_identical(capsys, tmp_path):
    cfg = tmp_path / "scan.ini"
    cfg.write_text("[run]\nevaluate = noise_budget\noutput = s.csv\n[sweep]\nenvironment.pressure_torr = "
                   "geomspace(1e-10, 1e-6, 5)\n")
    run(capsys, "sweep", str(cfg), "--outdir", str(tmp_path / "a"))
    run(capsys, "sweep", str(cfg), "--outdir", str(tmp_path / "b"))
    assert (tmp_path / "a" / "s.csv").read_bytes() == (tmp_path / "b" / "s.csv").read_bytes()


def test_figure_2a_schema(capsys, tmp_path):
    code, _ = run(capsys, "figure", "2a", "--outdir", str(tmp_path))
    meta, cols, rows = read_table(tmp_path / "fig2a.csv")
    assert code == 0
    assert cols == ["finesse", "n_f", "n_tilde_min", "kappa_rad_s", "delta2_opt", "zeta_opt", "Gamma", "status"]
    assert len(rows) == len(figures.FINESSE_GRID)
    assert "config_sha256" in meta and meta["figure"] == "2a"


def test_figure_3_schema(tmp_path):
    figures.fig_3(tmp_path)
    _, cols, rows = read_table(tmp_path / "fig3.csv")
    rho = np.array([float(r[0]) for r in rows])
    kz = np.array([float(r[1]) for r in rows])
    assert sorted(set(rho)) == list(figures.RHO_SIZES)
    assert kz.min() == 0.0 and kz.max() == pytest.approx(math.pi)


def test_figure_6_in_lamb_dicke_regime(tmp_path):
    figures.fig_6(tmp_path)
    _, cols, rows = read_table(tmp_path / "fig6.csv")
    assert cols == ["r_nm", "eta"]
    assert all(float(r[1]) < 1e-2 for r in rows)


@pytest.mark.parametrize("fid", ["1c", "1d", "2b", "2c", "5"])
def test_quick_figures(fid, tmp_path):
    (path,) = figures.FIGURES[fid](tmp_path)
    _, cols, rows = read_table(path)
    assert rows and all(len(r) == len(cols) for r in rows)
    assert all(math.isfinite(float(v)) for r in rows for v in r)


def test_figure_4_marks_runaway(tmp_path):
    (path,) = figures.fig_4(tmp_path)
    _, cols, rows = read_table(path)
    status = {r[-1] for r in rows}
    assert status <= {"ok", "runaway"}
    for r in rows:
        assert (r[-1] == "runaway") == (r[3] == "nan")


def test_check_subset(capsys):
    code, out = run(capsys, "check", "--only", "AC-3", "AC-4")
    assert code == 0
    lines = out.out.strip().splitlines()
    assert lines[0].startswith("PASS AC-3") and lines[-1] == "2/2 checks passed"


def test_check_json(capsys):
    code, out = run(capsys, "check", "--only", "AC-15", "--json")
    (entry,) = json.loads(out.out)
    assert entry["id"] == "AC-15" and entry["passed"] and entry["provenance"] == "published"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "levicav", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("levicav ")
