import math

import pytest
from hypothesis import given, strategies as st

from levicav import noise, trap
from levicav.physcore import CavitySetup, Environment, Sphere, convert

GAMMA_G = 1.4501014955653111e-06
Q_G = 4332927954625.779
N_OSC_GAS = 110319.70486439835
N_OSC_RECOIL = 38.497433455066257
# oracle used hbar truncated to 10 digits; hbar^5 k_B^6 limits agreement to ~3e-9
N_OSC_BB_1MHZ = 127100724364.52173
ANISO_PEAK = 0.19004336263328510
ANISO_103 = 1.5546813675696147e-05

S50 = Sphere(50e-9)
ENV = Environment(convert(1e-10, "Torr", "Pa"))
WM = 2 * math.pi * 1e6


def test_gas_damping():
    assert noise.gas_damping(S50, Environment()).rate == 0.0
    d = noise.gas_damping(S50, ENV)
    assert d.rate == pytest.approx(GAMMA_G, rel=1e-9)
    assert d.free_molecular


def test_gas_heating():
    h = noise.gas_heating(S50, ENV, WM)
    assert h.quality == pytest.approx(Q_G, rel=1e-9)
    assert h.n_osc == pytest.approx(N_OSC_GAS, rel=1e-9)
    assert h.tau * GAMMA_G * 1.380649e-23 * 300 / (1.054571817e-34 * WM) == pytest.approx(1, rel=1e-9)


def test_gas_heating_no_gas_sentinel():
    h = noise.gas_heating(S50, Environment(), WM)
    assert h.status == noise.NO_GAS_LIMIT
    assert math.isinf(h.n_osc)


def test_mean_free_path_and_regime_flag():
    mfp = noise.mean_free_path(Environment(convert(1.0, "Torr", "Pa")))
    assert 30e-6 < mfp < 150e-6
    dense = noise.gas_damping(S50, Environment(convert(1e3, "Torr", "Pa")))
    assert not dense.free_molecular and dense.rate > 0


@given(st.floats(1e-9, 1e-3), st.floats(5e-9, 1e-7))
def test_gas_scalings(p, r):
    s = Sphere(r)
    g = noise.gas_damping(s, Environment(p)).rate
    assert noise.gas_damping(s, Environment(2 * p)).rate == pytest.approx(2 * g, rel=1e-12)
    assert noise.gas_damping(s.with_radius(2 * r), Environment(p)).rate == pytest.approx(g / 2, rel=1e-12)


def test_recoil_oscillations():
    s = Sphere.high_index(50e-9)
    n_closed = noise.recoil_oscillations(s, 1e-6)
    assert n_closed == pytest.approx(N_OSC_RECOIL, rel=1e-9)
    for inten in (1e10, 1e12, 1e13):
        assert noise.recoil_jump_rate(trap.trap_params(s, inten))[1] == pytest.approx(n_closed, rel=1e-9)


@given(st.floats(1e-9, 1e-7), st.floats(1e9, 1e13))
def test_recoil_rate_scales_with_volume(r, inten):
    g1 = noise.recoil_jump_rate(trap.trap_params(Sphere.high_index(r), inten))[0]
    g2 = noise.recoil_jump_rate(trap.trap_params(Sphere.high_index(2 * r), inten))[0]
    assert g2 / g1 == pytest.approx(8, rel=1e-9)


@given(st.floats(1e2, 1e6), st.floats(5e-9, 2e-7), st.floats(1e5, 1e7))
def test_shot_noise_closed_form_matches_assembled(fin, r, wm):
    s = Sphere.high_index(r)
    cav = CavitySetup(1e-2, 25e-6, finesse=fin)
    tp = trap.trap_for_frequency(s, wm, 1e-6)
    n1 = trap.trap_photon_number(s, cav, wm)
    assembled = noise.shot_noise_heating(tp, cav, n1).n_osc
    assert noise.shot_noise_oscillations(s, cav, wm) == pytest.approx(assembled, rel=1e-12)


def test_shot_noise_vanishes_for_many_photons():
    tp = trap.trap_for_frequency(Sphere.high_index(50e-9), WM)
    cav = CavitySetup(1e-2, 25e-6, finesse=1e4)
    assert noise.shot_noise_heating(tp, cav, 1e30).rate < 1e-15
    with pytest.raises(ValueError):
        noise.shot_noise_heating(tp, cav, 0)


def test_shot_noise_fig5_range():
    s = Sphere.high_index(50e-9)
    for fin in (1e3, 1e4, 1e5):
        cav = CavitySetup(1e-2, 25e-6, finesse=fin)
        assert noise.shot_noise_oscillations(s, cav, 2 * math.pi * 0.5e6) >= 1e10


def test_blackbody():
    assert noise.blackbody_jump_rate(Sphere(5e-8, bb_factor=0.0), 300, WM) == 0.0
    assert noise.blackbody_oscillations(Sphere(5e-8), 300, 300, WM) == pytest.approx(N_OSC_BB_1MHZ, rel=1e-8)
    assert noise.blackbody_jump_rate(Sphere(5e-9), 300, WM) == noise.blackbody_jump_rate(Sphere(5e-8), 300, WM)
    assert noise.blackbody_jump_rate(S50, 600, WM) / noise.blackbody_jump_rate(S50, 300, WM) == pytest.approx(64)


def test_anisotropy():
    s = Sphere.high_index(50e-9)
    env = Environment()
    sphere_case = noise.anisotropy_heating(1.0, s, env, WM)
    assert sphere_case.eps_theta == 0 and sphere_case.rate_ratio == 0
    w2 = noise.equipartition_rotation(s, 300)
    peak = noise.anisotropy_heating(1.2, s, env, math.sqrt(w2), w2)
    assert peak.rate_ratio / peak.eps_theta**2 == pytest.approx(ANISO_PEAK, rel=1e-9)
    worst = noise.anisotropy_heating(1.03, s, env, math.sqrt(w2), w2)
    assert worst.rate_ratio == pytest.approx(ANISO_103, rel=1e-6)
    with pytest.raises(ValueError):
        noise.anisotropy_heating(0.9, s, env, WM)


def test_anisotropy_peak_is_at_rms_rotation():
    s = Sphere.high_index(50e-9)
    w2 = 1e13
    rates = [noise.anisotropy_heating(1.05, s, Environment(), f * math.sqrt(w2), w2).rate_ratio
             for f in (0.9, 1.0, 1.1)]
    assert rates[1] > rates[0] and rates[1] > rates[2]


def test_budget_dominant_channels():
    s = Sphere.high_index(50e-9)
    tp = trap.trap_for_frequency(s, WM)
    assert noise.noise_budget(s, ENV, tp).dominant == "recoil"
    s2 = Sphere.high_index(2e-9)
    assert noise.noise_budget(s2, ENV, trap.trap_for_frequency(s2, WM)).dominant == "gas"


def test_budget_recoil_only():
    s = Sphere.high_index(50e-9)
    b = noise.noise_budget(s, Environment(), trap.trap_for_frequency(s, WM), shot_noise=False, blackbody=False)
    assert list(b.n_osc) == ["recoil"]


def test_crossover_radius():
    from scipy.optimize import brentq

    def diff(logr):
        s = Sphere.high_index(10.0**logr)
        tp = trap.trap_for_frequency(s, WM)
        return math.log(noise.recoil_jump_rate(tp)[1] / noise.gas_heating(s, ENV, WM).n_osc)

    r = 10 ** brentq(diff, -9, -7)
    assert 3e-9 <= r <= 8e-9
