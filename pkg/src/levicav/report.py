"""Regression checks against published and independently derived numbers.

Each check carries an identifier AC-1 .. AC-17, the reference value, the
computed value, the tolerance and a provenance tag:

``published``  a number quoted in the source literature,
``derived``    an independent evaluation frozen at build time,
``property``   a structural invariant of the model.
"""

from __future__ import annotations

import json
import math
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import cooling, figures, mie, noise, sidebands, thermal, trap
from .config import loads
from .figures import WAVELENGTH, high_index
from .physcore import Environment, Sphere, convert
from .sweep import run_sweep


@dataclass
class Check:
    id: str
    name: str
    reference: str
    computed: str
    tolerance: str
    passed: bool
    provenance: str

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.id} {self.name}: computed {self.computed}; reference {self.reference} ({self.tolerance})"


def _in(v, lo, hi):
    return lo <= v <= hi


def _rel(a, b):
    return abs(a - b) / abs(b)


def ac1_gas():
    s = Sphere(50e-9)
    env = Environment(convert(1e-10, "Torr", "Pa"))
    wm = 2 * math.pi * 1e6
    g = noise.gas_damping(s, env).rate
    h = noise.gas_heating(s, env, wm)
    ok = _in(g, 0.5e-6, 3e-6) and _in(h.quality, 2e12, 1e13) and _in(h.n_osc, 0.5e5, 3e5)
    return Check("AC-1", "gas damping and heating", "gamma_g ~1e-6 /s, Q_g ~6e12, N_osc ~1e5",
                 f"gamma_g={g:.3g} /s, Q_g={h.quality:.3g}, N_osc={h.n_osc:.3g}",
                 "gamma_g in [0.5e-6,3e-6], Q_g in [2e12,1e13], N_osc in [0.5e5,3e5]", ok, "published")


N_OSC_RECOIL_50NM = 38.5  # 5 lambda^3 / (8 pi^3 V) at r = 50 nm, lambda = 1 um


def ac2_recoil():
    s = high_index(50e-9)
    tp = trap.trap_params(s, convert(1.0, "W/um2", "W/m2"), WAVELENGTH)
    n = noise.recoil_jump_rate(tp)[1]
    return Check("AC-2", "recoil oscillation count", f"{N_OSC_RECOIL_50NM} (~40)", f"{n:.4g}", "1% relative",
                 _rel(n, N_OSC_RECOIL_50NM) <= 0.01, "derived")


def ac3_scatter():
    r = trap.scattering_rate(high_index(50e-9), convert(1.0, "W/um2", "W/m2"), WAVELENGTH)
    return Check("AC-3", "photon scattering rate", "~1e15 /s", f"{r:.3g} /s", "[1e15, 3e15]",
                 _in(r, 1e15, 3e15), "published")


def ac4_trap_frequency():
    w = trap.trap_frequency(high_index(50e-9), convert(1.0, "W/um2", "W/m2"), WAVELENGTH) / (2 * math.pi)
    return Check("AC-4", "trap frequency at 1 W/um^2", "several MHz", f"{w / 1e6:.3g} MHz", "[1, 10] MHz",
                 _in(w, 1e6, 1e7), "published")


def ac5_cooling_optimum(n=20, seed=5):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for phi in 10.0 ** rng.uniform(-5, -2, n):
        x_ref, v_ref = cooling.resolved_optimum(phi)
        x, v = sidebands.minimize_ratio(lambda k: cooling.resolved_occupation(k, phi), 1e-4, 10.0)
        worst = max(worst, _rel(x, x_ref), _rel(v, v_ref))
    return Check("AC-5", "resolved cooling optimum", "argmin 2 phi^(1/3), min 3 phi^(2/3)/4",
                 f"worst relative error {worst:.2e}", "1e-6 relative", worst <= 1e-6, "published")


def ac6_fig2a():
    s = high_index(figures.COOL_RADIUS)
    args = (s, figures.COOL_LENGTH, figures.COOL_WAIST, WAVELENGTH, figures.COOL_FREQ)
    best = cooling.best_finesse(*args)
    cross = cooling.crossing_finesse(*args, hi=best.finesse)
    tf = cooling.final_temperature(best.n_f, figures.COOL_FREQ)
    ok = (_in(cross, 3600 * 0.8, 3600 * 1.2) and _in(best.n_f, 0.02 * 0.7, 0.02 * 1.3)
          and _in(best.finesse, 3e4, 8e4) and _in(best.gamma, 3e5, 3e6) and _in(tf, 3e-6, 12e-6))
    return Check("AC-6", "optimised cooling versus finesse",
                 "n_f=1 at F~3600; min n_f~0.02 near F~5e4, Gamma~1e6 /s; T_f~6 uK",
                 f"F(n_f=1)={cross:.0f}; min n_f={best.n_f:.4f} at F={best.finesse:.3g}, "
                 f"Gamma={best.gamma:.3g} /s; T_f={tf * 1e6:.2f} uK",
                 "F +-20%; n_f +-30%, F in [3e4,8e4]; Gamma in [3e5,3e6]; T_f in [3,12] uK", ok, "published")


def ac7_epr():
    worst = 0.0
    for x in (0.02, 0.05, 0.1):
        for r in (0.0, 0.35, 0.7):
            for phi in (1e-4, 4e-3):
                p = sidebands.transfer_params(x, phi)
                num = sidebands.epr_variance_numeric(sidebands.SidebandSystem(p), sidebands.SidebandSystem(p), r)
                worst = max(worst, _rel(num.value, sidebands.epr_variance_analytic(r, x, phi)))
    rng = np.random.default_rng(7)
    worst_min = 0.0
    for r, phi in zip(rng.uniform(0, 1.5, 10), 10.0 ** rng.uniform(-5, -2, 10)):
        ref, _ = sidebands.epr_optimum(r, phi)
        _, v = sidebands.minimize_ratio(lambda k: sidebands.epr_variance_analytic(r, k, phi), 1e-4, 10.0)
        worst_min = max(worst_min, _rel(v, ref))
    ok = worst <= 0.05 and worst_min <= 1e-9
    return Check("AC-7", "EPR transfer: numeric versus closed form", "closed-form joint variance and its minimum",
                 f"numeric max deviation {worst:.2e}; minimum max deviation {worst_min:.1e}",
                 "5% numeric; 1e-9 minimum", ok, "derived")


def ac8_epr_finesse():
    _, dmin, _, fin = figures.epr_curve([0.5])[0]
    return Check("AC-8", "EPR below vacuum at moderate finesse", "Delta_EPR < 1 with F < 1e5",
                 f"Delta_EPR={dmin:.3f} at F={fin:.3g}", "Delta_EPR < 1 and F < 1e5",
                 dmin < 1 and fin < 1e5, "published")


def ac9_squeezing():
    worst = 0.0
    for x in (0.02, 0.05, 0.1):
        for phi in (1e-5, 1e-4, 1e-3):
            num, ana = sidebands.squeeze_output_variance(x, phi)
            worst = max(worst, _rel(num, ana))
    worst_opt = 0.0
    for phi in (1e-5, 1e-4, 1e-3):
        _, v = sidebands.minimize_ratio(lambda k: sidebands.squeezing_variance_analytic(k, phi), 1e-4, 10.0)
        worst_opt = max(worst_opt, _rel(v, 2.04 * phi ** (2 / 3)))
    phi10 = trap.recoil_parameter(high_index(10e-9), WAVELENGTH)
    x10, _ = sidebands.squeezing_optimum(phi10)
    db10 = -10 * math.log10(sidebands.squeeze_output_variance(x10, phi10)[0])
    ok = worst <= 0.05 and worst_opt <= 0.02 and db10 >= 25
    return Check("AC-9", "squeezed output light", "optimum 2.04 phi^(2/3); over 25 dB at r=10 nm",
                 f"numeric/analytic max deviation {worst:.2e}; optimum deviation {worst_opt:.2e}; "
                 f"r=10 nm {db10:.2f} dB", "5%; 2%; >= 25 dB", ok, "published")


def lossy_design():
    return sidebands.squeezing_design(high_index(35e-9), 2e-2, 10e-6, WAVELENGTH, 2 * math.pi * 0.65e6, 1e-6)


def ac10_lossy():
    d = lossy_design()
    ok = _in(d.squeezing_db, 13.5, 16.5) and _in(d.zeta, 0.15, 0.35)
    return Check("AC-10", "squeezing with cavity loss", "~15 dB, zeta~1/4",
                 f"{d.squeezing_db:.2f} dB, zeta={d.zeta:.3f}", "15+-1.5 dB, zeta 0.25+-0.1", ok, "published")


def ac11_lamb_dicke():
    rows = figures.lamb_dicke_curve()
    worst = max(eta for _, eta in rows)
    return Check("AC-11", "Lamb-Dicke parameter for r in [10,100] nm", "eta < 1e-2", f"max eta={worst:.3g}",
                 "< 1e-2", worst < 1e-2, "published")


def ac12_mie():
    small, large = mie.force_comparison_sweep([0.5, 2.0], figures.KZ0_GRID)
    surf = 0.0
    for rho in (0.5, 2.0):
        sol = mie.mie_solve_size(rho / math.sqrt(2.0), 2.0)
        a = mie.standing_wave_force_reduced(sol, [math.pi / 4], 1.1)[0]
        b = mie.standing_wave_force_reduced(sol, [math.pi / 4], 3.0)[0]
        surf = max(surf, _rel(a, b))
    ok = small.max_deviation <= 0.05 and (large.sign_flips > 0 or large.peak_ratio > 1.5) and surf <= 1e-6
    return Check("AC-12", "exact versus dipole force",
                 "close agreement at rho=0.5; dipole force much larger or opposite sign at rho=2",
                 f"deviation at 0.5: {small.max_deviation:.3f} of peak; at 2: peak ratio {large.peak_ratio:.2f}, "
                 f"{large.sign_flips} sign flips; surface dependence {surf:.1e}",
                 "<= 5% of peak; ratio > 1.5 or a flip; <= 1e-6", ok, "published")


def ac13_thermal():
    inten = convert(10.0, "W/um2", "W/m2")
    s = figures.thermal_sphere(10.0)
    temps = {p: thermal.equilibrium_temperature(s, Environment(convert(p, "Torr", "Pa")), inten).t_int
             for p in (1e-10, 1e-9, 1e-8, 1e-6)}
    half = thermal.equilibrium_temperature(figures.thermal_sphere(10.0, 25e-9),
                                           Environment(convert(1e-10, "Torr", "Pa")), inten).t_int
    spread = (max(temps[1e-10], temps[1e-9], temps[1e-8]) - min(temps[1e-10], temps[1e-9], temps[1e-8])) / temps[1e-8]
    dr = _rel(half, temps[1e-10])
    ok = max(temps.values()) < 2000 and spread < 0.01 and dr < 0.01
    return Check("AC-13", "internal temperature at 10 W/um^2, 10 dB/km", "below melting; pressure and size independent",
                 f"T_int={temps[1e-10]:.1f} K (max {max(temps.values()):.1f} K); pressure spread {spread:.1e}; "
                 f"half-radius change {dr:.1e}", "< 2000 K; < 1%; < 1%", ok, "published")


def ac14_shot_noise():
    rows = figures.shot_noise_curve(np.geomspace(1e3, 1e5, 21))
    worst = min(r[1] for r in rows)
    return Check("AC-14", "shot-noise oscillation count", "at least ~1e10", f"min N_osc={worst:.3g}", ">= 1e10",
                 worst >= 1e10, "published")


def ac15_blackbody():
    n = noise.blackbody_oscillations(Sphere(50e-9, bb_factor=0.1), 300.0, 300.0, 2 * math.pi * 1e6)
    return Check("AC-15", "blackbody recoil oscillation count", "~1e11", f"{n:.3g}", "[3e10, 3e11]",
                 _in(n, 3e10, 3e11), "published")


def ac16_anisotropy():
    s = high_index(50e-9)
    env = Environment()
    w2 = noise.equipartition_rotation(s, env.temperature)
    a = noise.anisotropy_heating(1.03, s, env, math.sqrt(w2), w2)
    peak = a.rate_ratio / a.eps_theta**2
    ok = _in(peak, 0.18, 0.22) and a.rate_ratio <= 3e-5
    return Check("AC-16", "anisotropy parametric heating", "peak ~0.2 eps^2; ~1e-5 at a/b=1.03",
                 f"peak {peak:.4f} eps^2; a/b=1.03 -> {a.rate_ratio:.3g}", "0.2+-10%; <= 3e-5", ok, "published")


_SWEEP_CONFIG = """
[run]
scenario = determinism
evaluate = noise_budget
output = det.csv
chunk_size = 3

[sphere]
high_index = true

[sweep]
sphere.radius_nm = geomspace(5, 100, 7)
"""


def property_suite(seed=17):
    """Vacuum preservation, truncation convergence, A/B symmetry and sweep determinism."""
    out = {}
    rng = np.random.default_rng(seed)
    dev = 0.0
    for _ in range(5):
        x = rng.uniform(0.01, 0.2)
        sy = sidebands.SidebandSystem(sidebands.SidebandParams(x, rng.uniform(0.1, 0.5) * x), 1, secular=True)
        sp = sidebands.spectrum(sy, rng.uniform(-1, 1, 4) * x)
        dev = max(dev, np.max(np.abs(sp.s_plus - 1)), np.max(np.abs(sp.s_minus - 1)))
    out["vacuum"] = dev
    ratio = 0.0
    for _ in range(8):
        x = rng.uniform(0.01, 0.2)
        p = sidebands.transfer_params(x, 10 ** rng.uniform(-5, -3), 1.0, rng.uniform(0, 1))
        w = [rng.uniform(-0.5, 0.5) * x]
        v1 = sidebands.spectrum(sidebands.SidebandSystem(p, 1), w).s_plus[0]
        v2 = sidebands.spectrum(sidebands.SidebandSystem(p, 2), w).s_plus[0]
        ratio = max(ratio, _rel(v2, v1) / x**2)
    out["truncation"] = ratio
    pa = sidebands.transfer_params(0.05, 1e-4)
    pb = sidebands.transfer_params(0.08, 2e-4)
    ab = sidebands.epr_variance_numeric(sidebands.SidebandSystem(pa), sidebands.SidebandSystem(pb), 0.4).value
    ba = sidebands.epr_variance_numeric(sidebands.SidebandSystem(pb), sidebands.SidebandSystem(pa), 0.4).value
    out["symmetry"] = _rel(ab, ba)
    cfg = loads(_SWEEP_CONFIG)
    with tempfile.TemporaryDirectory() as d1, tempfile.TemporaryDirectory() as d2:
        b1 = Path(run_sweep(cfg, d1)).read_bytes()
        b2 = Path(run_sweep(cfg, d2)).read_bytes()
    out["determinism"] = b1 == b2
    return out


def ac17_properties():
    p = property_suite()
    ok = p["vacuum"] <= 1e-9 and p["truncation"] <= 10 and p["symmetry"] <= 1e-12 and p["determinism"]
    return Check("AC-17", "property suite", "vacuum 1+-1e-9; truncation <= 10 (k/w)^2; symmetric; deterministic",
                 f"vacuum dev {p['vacuum']:.1e}; truncation {p['truncation']:.3f} (k/w)^2; "
                 f"asymmetry {p['symmetry']:.1e}; deterministic={p['determinism']}",
                 "as stated", ok, "property")


CHECKS = {f"AC-{i}": f for i, f in enumerate(
    [ac1_gas, ac2_recoil, ac3_scatter, ac4_trap_frequency, ac5_cooling_optimum, ac6_fig2a, ac7_epr,
     ac8_epr_finesse, ac9_squeezing, ac10_lossy, ac11_lamb_dicke, ac12_mie, ac13_thermal, ac14_shot_noise,
     ac15_blackbody, ac16_anisotropy, ac17_properties], 1)}


def run_check(check_id):
    try:
        return CHECKS[check_id]()
    except Exception as exc:  # a crashing check is a failed check
        return Check(check_id, "error", "-", f"{type(exc).__name__}: {exc}", "-", False, "error")


def run_all(ids=None):
    return [run_check(i) for i in (ids or CHECKS)]


def to_json(checks):
    return json.dumps([asdict(c) for c in checks], indent=2)
