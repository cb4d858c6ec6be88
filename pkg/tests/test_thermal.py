import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from levicav import thermal
from levicav.io import read_table
from levicav.physcore import Environment, Sphere, bulk_loss_to_im_eps, convert

P_ABS_10W = 1.9181467543726951e-11
P_GAS_1TORR_600K = -3.677278260526994e-10
P_BB_1000K = 5.962515677989464e-11


def lossy(db=10.0, radius=50e-9):
    return Sphere(radius, 2000.0, 2.0, bulk_loss_to_im_eps(db, 2.0, 1e-6), 0.1)


def test_absorbed_power():
    assert thermal.absorbed_power(lossy(), 0.0, 1e-6) == 0.0
    assert thermal.absorbed_power(lossy(), 1e13, 1e-6) == pytest.approx(P_ABS_10W, rel=1e-9)
    assert thermal.absorbed_power(lossy(0.0), 1e13, 1e-6) == 0.0
    with pytest.raises(ValueError):
        thermal.absorbed_power(lossy(), -1.0, 1e-6)


def test_gas_power():
    env = Environment(convert(1.0, "Torr", "Pa"))
    assert thermal.gas_cooling_power(lossy(), env, 300.0) == 0.0
    assert thermal.gas_cooling_power(lossy(), env, 600.0) == pytest.approx(P_GAS_1TORR_600K, rel=1e-9)
    assert thermal.gas_cooling_power(lossy(), Environment(), 600.0) == 0.0


def test_blackbody_power():
    s = lossy()
    assert thermal.blackbody_power(s, 1000.0) == pytest.approx(P_BB_1000K, rel=1e-8)
    assert thermal.blackbody_net_power(s, 300.0, 300.0) == 0.0
    assert thermal.blackbody_net_power(s, 300.0, 1000.0) < 0


def test_no_heating_means_ambient():
    st_ = thermal.equilibrium_temperature(lossy(), Environment(1.0), 0.0)
    assert st_.t_int == 300.0


def test_residual_and_balance():
    env = Environment(convert(1e-10, "Torr", "Pa"))
    st_ = thermal.equilibrium_temperature(lossy(), env, 1e13)
    assert st_.converged
    scale = st_.p_abs
    assert abs(st_.residual) <= 1e-6 * scale
    assert st_.p_abs + st_.p_gas + st_.p_bb_net == pytest.approx(0.0, abs=1e-6 * scale)


def test_radius_independent_in_vacuum():
    env = Environment(convert(1e-10, "Torr", "Pa"))
    t = [thermal.equilibrium_temperature(lossy(radius=r), env, 1e13).t_int for r in (20e-9, 50e-9, 100e-9)]
    # absorption and blackbody both scale with volume; gas is negligible
    assert max(t) - min(t) < 1e-2
    assert 700 < t[1] < 900


def test_runaway_raised():
    s = Sphere(50e-9, 2000.0, 2.0, 0.5, 1e-6)
    with pytest.raises(thermal.RunawayError):
        thermal.equilibrium_temperature(s, Environment(), 1e14)


@settings(max_examples=30, deadline=None)
@given(st.floats(-9, 1), st.floats(9, 14))
def test_monotone_in_intensity_and_pressure(logp, logi):
    s, env = lossy(), Environment(10.0**logp)
    t = thermal.equilibrium_temperature(s, env, 10.0**logi).t_int
    assert thermal.equilibrium_temperature(s, env, 2 * 10.0**logi).t_int >= t
    assert thermal.equilibrium_temperature(s, env.with_pressure(10 * 10.0**logp), 10.0**logi).t_int <= t + 1e-6
    assert t >= 300.0


def test_map_shape_and_csv(tmp_path):
    p = np.array([1e-8, 1.0])
    i = np.array([1e9, 1e12, 1e13])
    temps, status = thermal.temperature_map(lossy(100.0), Environment(), p, i)
    assert temps.shape == (2, 3) and status.shape == (2, 3)
    assert np.all(temps[1] <= temps[0])
    path = thermal.write_temperature_csv(tmp_path / "t.csv", p, i, temps, status, {"case": "x"})
    meta, cols, rows = read_table(path)
    assert cols == ["pressure_Pa", "intensity_W_m2", "T_int_K", "status"]
    assert len(rows) == 6 and meta["case"] == "x"
    with pytest.raises(ValueError):
        thermal.temperature_map(lossy(), Environment(), [], i)


def test_higher_loss_runs_hotter():
    env = Environment(convert(1e-6, "Torr", "Pa"))
    t = [thermal.equilibrium_temperature(lossy(db), env, 1e12).t_int for db in (10, 100, 1000)]
    assert t[0] < t[1] < t[2]
    assert not math.isnan(t[2])
