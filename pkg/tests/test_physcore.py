import math

import pytest
from hypothesis import given, strategies as st

from levicav.physcore import (EPS0, CavitySetup, DriveConfig, Environment, Sphere, bulk_loss_to_im_eps,
                              clausius_mossotti, convert, linewidth_from_finesse, polarizability)

# mpmath evaluation with hand-typed CODATA constants
ALPHA_EPS2_50NM = 3.47703142327459493e-33
IM_EPS_10DB = 5.18263732140666678e-10


def test_polarizability_vacuum_sphere_is_zero():
    s = Sphere(50e-9, eps_real=1.0 + 1e-15)
    assert abs(polarizability(s)) < 1e-45


def test_polarizability_conductor_limit():
    s = Sphere.high_index(50e-9)
    assert polarizability(s) == pytest.approx(3 * EPS0 * s.volume, rel=1e-15)
    assert polarizability(s).imag == 0


def test_polarizability_eps2_oracle():
    assert polarizability(Sphere(50e-9, eps_real=2.0)).real == pytest.approx(ALPHA_EPS2_50NM, rel=1e-9)


@given(st.floats(1e-9, 1e-6), st.floats(1.01, 50.0))
def test_polarizability_volume_scaling(r, eps):
    a1 = polarizability(Sphere(r, eps_real=eps))
    a2 = polarizability(Sphere(2 * r, eps_real=eps))
    assert abs(a2 / a1 - 8) < 1e-12


@given(st.floats(1.01, 50.0), st.floats(1.01, 50.0))
def test_polarizability_monotone_in_cm(e1, e2):
    lo, hi = sorted((e1, e2))
    assert polarizability(Sphere(1e-7, eps_real=lo)).real <= polarizability(Sphere(1e-7, eps_real=hi)).real


def test_bulk_loss_examples():
    assert bulk_loss_to_im_eps(0.0, 2.0, 1e-6) == 0.0
    assert bulk_loss_to_im_eps(10.0, 2.0, 1e-6) == pytest.approx(IM_EPS_10DB, rel=1e-9)
    assert bulk_loss_to_im_eps(1000.0, 2.0, 1e-6) == pytest.approx(100 * IM_EPS_10DB, rel=1e-12)


def test_convert_examples():
    assert convert(1e-10, "Torr", "Pa") == pytest.approx(1.33322e-8, rel=1e-15)
    assert convert(1.0, "W/um2", "W/m2") == 1e12
    assert convert(-25.0, "dB", "ratio") == pytest.approx(10 ** -2.5, rel=1e-15)
    assert convert(1.0, "MHz", "rad/s") == pytest.approx(2e6 * math.pi)


@pytest.mark.parametrize("pair", [("Torr", "Pa"), ("W/um2", "W/m2"), ("nm", "m"), ("um", "m"),
                                  ("MHz", "rad/s"), ("K", "J")])
@given(v=st.floats(1e-6, 1e6))
def test_convert_round_trip(pair, v):
    back = convert(convert(v, *pair), pair[1], pair[0])
    assert abs(back - v) <= 1e-12 * abs(v)


@given(db=st.floats(-200, 200))
def test_convert_db_round_trip(db):
    assert convert(convert(db, "dB", "ratio"), "ratio", "dB") == pytest.approx(db, abs=1e-12)


def test_convert_rejects_unknown_pair():
    with pytest.raises(ValueError):
        convert(1.0, "Torr", "K")


def test_high_index_cm_is_exactly_one():
    assert clausius_mossotti(math.inf) == 1
    assert Sphere.high_index(1e-8).cm == 1
    assert Sphere.high_index(1e-8).cm_imag == 0


def test_cm_imag_identity():
    s = Sphere(5e-8, eps_real=2.3, eps_imag=0.01)
    assert s.cm_imag == pytest.approx(s.cm.imag, rel=1e-12)


@pytest.mark.parametrize("kwargs", [dict(radius=0), dict(radius=1e-8, density=-1), dict(radius=1e-8, eps_real=1.0),
                                    dict(radius=1e-8, eps_imag=-1e-3), dict(radius=1e-8, bb_factor=1.5)])
def test_sphere_invariants(kwargs):
    with pytest.raises(ValueError):
        Sphere(**kwargs)


def test_cavity_finesse_linewidth_roundtrip():
    cav = CavitySetup(1e-2, 25e-6, finesse=5e4)
    assert cav.kappa == pytest.approx(linewidth_from_finesse(5e4, 1e-2))
    assert CavitySetup(1e-2, 25e-6, linewidth=cav.kappa).finesse == pytest.approx(5e4, rel=1e-14)
    assert cav.mode_volume == pytest.approx(math.pi / 4 * 1e-2 * (25e-6) ** 2)


def test_cavity_needs_exactly_one_of_finesse_linewidth():
    with pytest.raises(ValueError):
        CavitySetup(1e-2, 25e-6)
    with pytest.raises(ValueError):
        CavitySetup(1e-2, 25e-6, finesse=1e4, linewidth=1e5)
    with pytest.raises(ValueError):
        CavitySetup(1e-2, 25e-6, finesse=1e4, loss_linewidth=1e9)


def test_environment_speeds():
    env = Environment()
    assert env.rms_speed / env.mean_speed == pytest.approx(math.sqrt(3 * math.pi / 8))
    with pytest.raises(ValueError):
        Environment(pressure=-1)


def test_drive_config_validation():
    DriveConfig(1e12, 0.25, -1e6, 0.0, 0.1)
    with pytest.raises(ValueError):
        DriveConfig(1e12, cooling_ratio=1.0)
    with pytest.raises(ValueError):
        DriveConfig(-1.0)
