import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from levicav import noise, trap
from levicav.physcore import CavitySetup, Sphere

# independent mpmath evaluations (hand-typed constants)
OMEGA_M_1W = 2 * math.pi * 3163372.0704249384
DEPTH_K_50NM = 379503.59250462678
G_50NM = 150692.12538470826
RSC_50NM = 2.0540516881542675e15
OMEGA_R_50NM = 0.0019878210437820239

I1 = 1e12
S50 = Sphere.high_index(50e-9)
CAV = CavitySetup(1e-2, 25e-6, 1e-6, finesse=5e4)


def test_trap_frequency():
    assert trap.trap_frequency(S50, 0.0, 1e-6) == 0.0
    w = trap.trap_frequency(S50, I1, 1e-6)
    assert w == pytest.approx(OMEGA_M_1W, rel=1e-9)
    assert 1e6 <= w / (2 * math.pi) <= 1e7


@given(st.floats(1e-9, 1e-7), st.floats(1e6, 1e14))
def test_trap_frequency_independent_of_radius_and_sqrt_intensity(r, inten):
    s = Sphere.high_index(r)
    w = trap.trap_frequency(s, inten, 1e-6)
    assert w == pytest.approx(trap.trap_frequency(S50, inten, 1e-6), rel=1e-12)
    assert trap.trap_frequency(s, 4 * inten, 1e-6) == pytest.approx(2 * w, rel=1e-12)


def test_intensity_for_frequency_inverts():
    w = 2 * math.pi * 0.5e6
    assert trap.trap_frequency(S50, trap.intensity_for_frequency(S50, w, 1e-6), 1e-6) == pytest.approx(w)


def test_trap_depth():
    assert trap.trap_depth(S50, 0.0) == 0.0
    assert trap.trap_params(S50, I1).depth_kelvin == pytest.approx(DEPTH_K_50NM, rel=1e-9)
    assert trap.trap_depth(S50.with_radius(1e-7), I1) / trap.trap_depth(S50, I1) == pytest.approx(8)


def test_coupling():
    assert trap.optomech_coupling(S50, CAV) == pytest.approx(G_50NM, rel=1e-9)
    wide = CavitySetup(2e-2, 25e-6, 1e-6, finesse=5e4)
    assert trap.optomech_coupling(S50, wide) == pytest.approx(G_50NM / 2, rel=1e-12)
    assert trap.optomech_coupling(S50.with_radius(5e-9), CAV) == pytest.approx(G_50NM * 1e-3, rel=1e-12)


def test_scattering_rate():
    assert trap.scattering_rate(S50, 0.0, 1e-6) == 0.0
    r = trap.scattering_rate(S50, I1, 1e-6)
    assert r == pytest.approx(RSC_50NM, rel=1e-9)
    assert 1e15 <= r <= 3e15


def test_sphere_cavity_loss():
    k1 = trap.sphere_cavity_loss(S50, CAV)
    assert k1 < 0.1 * CAV.kappa
    assert trap.sphere_cavity_loss(S50.with_radius(1e-7), CAV) / k1 == pytest.approx(64)


def test_recoil_frequency():
    assert trap.recoil_frequency(S50, 1e-6) == pytest.approx(OMEGA_R_50NM, rel=1e-9)
    assert trap.recoil_frequency(S50, 0.5e-6) == pytest.approx(4 * OMEGA_R_50NM, rel=1e-9)
    assert trap.recoil_frequency(Sphere.high_index(1e-3), 1e-6) < 1e-15


def test_zero_point_consistency():
    tp = trap.trap_params(S50, I1)
    assert tp.zero_point == pytest.approx(math.sqrt(1.054571817e-34 / (2 * tp.mass * tp.omega_m)), rel=1e-9)
    assert tp.mass == pytest.approx(2000 * S50.volume)


@given(st.floats(1e-9, 2e-7))
def test_volume_scalings(r):
    a, b = Sphere.high_index(r), Sphere.high_index(2 * r)
    assert trap.recoil_parameter(b, 1e-6) / trap.recoil_parameter(a, 1e-6) == pytest.approx(8, rel=1e-12)
    assert trap.sphere_cavity_loss(b, CAV) / trap.sphere_cavity_loss(a, CAV) == pytest.approx(64, rel=1e-12)
    assert trap.scattering_rate(b, I1, 1e-6) / trap.scattering_rate(a, I1, 1e-6) == pytest.approx(64, rel=1e-12)


@given(st.floats(5e-9, 1e-7), st.floats(1e9, 1e14))
def test_recoil_rate_identity(r, inten):
    tp = trap.trap_params(Sphere.high_index(r), inten)
    gamma, _ = noise.recoil_jump_rate(tp)
    assert gamma == pytest.approx(0.4 * tp.recoil_frequency / tp.omega_m * tp.scatter_rate, rel=1e-15)
    # gamma_sc = phi omega_m
    assert gamma == pytest.approx(tp.phi * tp.omega_m, rel=1e-9)


def test_photon_number_maps_agree():
    w = 2 * math.pi * 0.5e6
    inten = trap.intensity_for_frequency(S50, w, 1e-6)
    assert trap.trap_photon_number(S50, CAV, w) == pytest.approx(trap.photon_number_from_intensity(inten, CAV),
                                                                 rel=1e-9)


def test_negative_intensity_rejected():
    for f in (lambda: trap.trap_frequency(S50, -1, 1e-6), lambda: trap.trap_depth(S50, -1),
              lambda: trap.scattering_rate(S50, -1, 1e-6)):
        with pytest.raises(ValueError):
            f()


def test_depth_grid_scaling():
    radii = np.array([10e-9, 20e-9, 40e-9])
    d = np.array([trap.trap_depth(Sphere.high_index(r), I1) for r in radii])
    assert np.allclose(d[1:] / d[:-1], 8)
