import json
import math
import subprocess
import sys

import pytest

from rabiscale.cli import main
from rabiscale.sweep import read_csv


def test_sweep_to_file(tmp_path):
    out = tmp_path / "s.csv"
    rc = main(["sweep", "--model", "jc", "--delta", "0.1", "--swept", "lambda", "--from", "0.1",
               "--to", "0.5", "--points", "5", "--observables", "sigma_z,gap", "--nmax", "20",
               "--out", str(out)])
    assert rc == 0
    columns, rows = read_csv(out)
    assert "sigma_z" in columns and len(rows) == 5
    assert rows[0]["n_max"] == 20


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[model]\nmodel = jc\ndelta = 0.1\nnmax = 12\n"
                   "[sweep]\nswept = lambda\nfrom = 0.1\nto = 0.3\npoints = 3\nobservables = gap\n"
                   f"[output]\nout = {tmp_path / 'from_file.csv'}\n")
    assert main(["sweep", "--config", str(cfg)]) == 0
    _, rows = read_csv(tmp_path / "from_file.csv")
    assert len(rows) == 3
    override = tmp_path / "flag.csv"
    assert main(["sweep", "--config", str(cfg), "--points", "4", "--out", str(override)]) == 0
    _, rows = read_csv(override)
    assert len(rows) == 4 and rows[0]["n_max"] == 12


def test_config_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[model]\ncolour = red\n")
    assert main(["sweep", "--config", str(cfg)]) == 2
    assert "unknown key" in capsys.readouterr().err
    cfg.write_text("[plot]\nx = 1\n")
    assert main(["sweep", "--config", str(cfg)]) == 2


def test_spectrum(capsys):
    assert main(["spectrum", "--model", "rabi", "--delta", "0.1", "--lambda", "0", "--nmax", "6",
                 "--levels", "3"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["energies"][0] == pytest.approx(-0.05)
    assert len(report["energies"]) == 3


def test_map_from_flags_and_config(tmp_path, capsys):
    two_pi = 2 * math.pi
    assert main(["map", "--system", "ion", "--param", f"Omega_tilde={two_pi * 1e4}",
                 "--param", "epsilon_tilde=0", "--param", f"nu_tilde={two_pi * 1e6}",
                 "--param", "eta=1"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["regime"] == "rabi_valid"
    cfg = tmp_path / "e.ini"
    omega_1, omega_2 = two_pi * 6e9, two_pi * 4e9
    cfg.write_text("[experiment]\nsystem = circuit-qed\n"
                   f"omega_q = {two_pi * 6.02e9}\nomega_b = {two_pi * 6.02e9}\n"
                   f"omega_1 = {omega_1}\nomega_2 = {omega_2}\n"
                   f"Omega_1 = {(omega_1 - omega_2) / 2}\nOmega_2 = {two_pi * 0.4e6}\n"
                   f"Omega_3 = {(omega_1 - omega_2) / 2}\nG = {two_pi * 4e6}\n")
    assert main(["map", "--config", str(cfg)]) == 0
    assert json.loads(capsys.readouterr().out)["regime"] == "jc_valid"


def test_map_errors(capsys):
    assert main(["map", "--system", "nv", "--param", "foo=1"]) == 2
    assert "unknown" in capsys.readouterr().err


def test_check_fast_exit_status(tmp_path):
    out = tmp_path / "report.json"
    rc = main(["check", "--level", "fast", "--out", str(out)])
    report = json.loads(out.read_text())
    assert rc == (0 if report["passed"] else 1)
    assert report["level"] == "fast"
    for item in report["criteria"]:
        assert {"id", "passed", "measured", "tolerance", "runtime_s"} <= set(item)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rabiscale.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "rabiscale" in proc.stdout
