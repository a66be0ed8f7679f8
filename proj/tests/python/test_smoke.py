import math
import os
import subprocess

import pytest

import isoshock as iso


def test_symmetric_collision():
    fan = iso.solve_middle_state(iso.GasState(1.0, 1.0), iso.GasState(1.0, -1.0))
    assert fan.middle.rho == pytest.approx(2.61803398874989485, rel=1e-12)
    assert fan.sigma_plus == pytest.approx(0.618033988749894848, rel=1e-12)
    assert fan.left_wave == iso.WaveKind.shock
    rep = iso.check_entropy(fan)
    assert rep.applicable and rep.admissible


def test_errors_are_typed():
    with pytest.raises(iso.DomainError):
        iso.solve_middle_state(iso.GasState(-1.0, 0.0), iso.GasState(1.0, 0.0))
    with pytest.raises(iso.ConfigError):
        iso.parse_config("grid.nx = -3\n")
    with pytest.raises(iso.DomainError):
        iso.eval_F(-1.0)
    with pytest.raises(iso.RangeError):
        iso.eval_F(1e6)


def test_riccati_and_test_function():
    est = iso.riccati_blowup_time(1.0, 0.0, 0.1, 2)
    assert est.blowup_time == pytest.approx(35.0, rel=1e-13)
    assert not est.censored
    assert iso.integrate_riccati(1.0, 0.0, 0.1, 3, 1000.0, 1.0).censored
    assert iso.eval_F(0.0) == pytest.approx(2 * math.pi)
    assert iso.eval_F(1.0) == pytest.approx(7.95492652101284527, rel=1e-12)


def test_short_simulation():
    c = iso.parse_config("[grid]\nnx = 80\nny = 64\nlx = 2\nly = 1.6\n[run]\nt_max = 0.2\n")
    sim = iso.Simulation(c)
    sim.advance_to(0.2)
    assert sim.time == 0.2
    f = sim.fields()
    assert f["rho"].shape == (64, 80)
    assert (f["rho"] > 0).all()
    vals = sim.functionals()
    assert vals["Y"] > 0
    out = iso.run(c)
    assert out["t"][-1] == pytest.approx(0.2)
    assert len(out["W"]) == len(out["t"])


def test_run_mode_testfn(tmp_path):
    c = iso.ExperimentConfig()
    c.output_dir = str(tmp_path / "tf")
    code, log = iso.run_mode(c, "testfn")
    assert code == 0
    assert "F(0)" in log


CLI = os.environ.get("ISOSHOCK_CLI")


@pytest.mark.skipif(not CLI, reason="ISOSHOCK_CLI not set")
def test_cli_exit_codes(tmp_path):
    ok = subprocess.run([CLI, "riemann", "--left", "1,1", "--right", "1,-1"], capture_output=True, text=True)
    assert ok.returncode == 0
    assert "2.618" in ok.stdout
    bad = tmp_path / "bad.ini"
    bad.write_text("[grid]\nnx = zero\n")
    r = subprocess.run([CLI, "simulate", "--config", str(bad)], capture_output=True, text=True)
    assert r.returncode == 2
    assert "grid.nx" in r.stderr + r.stdout
