"""Data behind each reproduced figure, written as CSV tables.

Every generator takes an output directory and returns the written paths.
Default parameters are module constants so reports and tests share them.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from . import cooling, mie, noise, sidebands, thermal, trap
from .io import provenance, write_table
from .physcore import CavitySetup, Environment, Sphere, bulk_loss_to_im_eps, convert

WAVELENGTH = 1e-6
DENSITY = 2000.0

# cooling / EPR cavity
COOL_RADIUS = 50e-9
COOL_FREQ = 2 * math.pi * 0.5e6
COOL_LENGTH = 1e-2
COOL_WAIST = 25e-6
FINESSE_GRID = np.geomspace(1e2, 1e6, 41)

THERMAL_LOSSES = (10.0, 100.0, 1000.0)  # dB/km
THERMAL_PRESSURES_TORR = np.geomspace(1e-10, 10.0, 23)
THERMAL_INTENSITIES = np.geomspace(1e-3, 1e2, 21)  # W/um^2

LAMB_DICKE_FREQ = 2 * math.pi * 1e6
LAMB_DICKE_RADII_NM = np.linspace(10.0, 100.0, 19)
RHO_SIZES = (0.5, 1.0, 1.5, 2.0)
KZ0_GRID = np.linspace(0.0, math.pi, 61)


def high_index(radius):
    return Sphere.high_index(radius, density=DENSITY)


def thermal_sphere(loss_db_per_km, radius=50e-9):
    return Sphere(radius, DENSITY, 2.0, bulk_loss_to_im_eps(loss_db_per_km, 2.0, WAVELENGTH), 0.1)


def _meta(fig, **extra):
    return provenance(f"figure {fig}", {"figure": fig, **extra})


def fig_1c(outdir):
    s = high_index(50e-9)
    inten = np.geomspace(1e-3, 1e2, 51)
    rows = [(i, trap.trap_frequency(s, convert(i, "W/um2", "W/m2"), WAVELENGTH) / (2e6 * math.pi)) for i in inten]
    return [write_table(Path(outdir) / "fig1c.csv", ["intensity_W_per_um2", "omega_m_over_2pi_MHz"], rows,
                        _meta("1c"))]


def fig_1d(outdir):
    inten = np.geomspace(1e-3, 1e2, 26)
    radii = np.geomspace(5.0, 200.0, 25)
    rows = [(i, r, trap.trap_depth(high_index(r * 1e-9), convert(i, "W/um2", "W/m2")) / convert(1.0, "K", "J"))
            for i in inten for r in radii]
    return [write_table(Path(outdir) / "fig1d.csv", ["intensity_W_per_um2", "radius_nm", "depth_K"], rows,
                        _meta("1d"))]


def cooling_curve(finesses=FINESSE_GRID):
    return cooling.optimize_cooling(high_index(COOL_RADIUS), COOL_LENGTH, COOL_WAIST, WAVELENGTH,
                                    COOL_FREQ, finesses)


def fig_2a(outdir):
    pts = cooling_curve()
    rows = [(p.finesse, p.n_f, p.n_tilde_min, p.kappa, p.delta2, p.zeta, p.gamma, p.status) for p in pts]
    cols = ["finesse", "n_f", "n_tilde_min", "kappa_rad_s", "delta2_opt", "zeta_opt", "Gamma", "status"]
    return [write_table(Path(outdir) / "fig2a.csv", cols, rows, _meta("2a"))]


def epr_curve(exp_m2r):
    """Optimised Delta_EPR and its finesse for the cooling-figure system at each exp(-2R)."""
    phi = trap.recoil_parameter(high_index(COOL_RADIUS), WAVELENGTH)
    rows = []
    for v in np.atleast_1d(exp_m2r):
        r = -0.5 * math.log(v)
        dmin, x = sidebands.epr_optimum(r, phi)
        cav = CavitySetup(COOL_LENGTH, COOL_WAIST, WAVELENGTH, linewidth=x * COOL_FREQ)
        rows.append((float(v), dmin, float(v), cav.finesse))
    return rows


def fig_2b(outdir):
    rows = epr_curve(np.linspace(0.05, 1.0, 20))
    return [write_table(Path(outdir) / "fig2b.csv", ["exp_minus_2R", "delta_epr_min", "perfect_transfer", "finesse_opt"],
                        rows, _meta("2b"))]


def squeezing_curve(radii_nm):
    rows = []
    for r in radii_nm:
        phi = trap.recoil_parameter(high_index(r * 1e-9), WAVELENGTH)
        x, v = sidebands.squeezing_optimum(phi)
        rows.append((float(r), 10.0 * math.log10(v), x))
    return rows


def fig_2c(outdir):
    rows = squeezing_curve(np.geomspace(5.0, 100.0, 20))
    return [write_table(Path(outdir) / "fig2c.csv", ["radius_nm", "variance_dB", "kappa_over_wm"], rows,
                        _meta("2c"))]


def fig_3(outdir):
    curves = mie.force_comparison_sweep(RHO_SIZES, KZ0_GRID, eps=2.0)
    return [mie.write_force_csv(Path(outdir) / "fig3.csv", curves, _meta("3", normalisation="dipole peak"))]


def fig_4(outdir):
    env = Environment()
    rows = []
    pressures = convert(THERMAL_PRESSURES_TORR, "Torr", "Pa")
    intens = convert(THERMAL_INTENSITIES, "W/um2", "W/m2")
    for loss in THERMAL_LOSSES:
        temps, status = thermal.temperature_map(thermal_sphere(loss), env, pressures, intens, WAVELENGTH)
        for i, p in enumerate(THERMAL_PRESSURES_TORR):
            for j, inten in enumerate(THERMAL_INTENSITIES):
                rows.append((loss, p, inten, temps[i, j], status[i, j]))
    cols = ["loss_db_per_km", "pressure_torr", "intensity_W_per_um2", "T_int_K", "status"]
    return [write_table(Path(outdir) / "fig4.csv", cols, rows, _meta("4", radius_nm=50, eps_real=2))]


def shot_noise_curve(finesses):
    s = high_index(COOL_RADIUS)
    rows = []
    tp = trap.trap_for_frequency(s, COOL_FREQ, WAVELENGTH)
    for f in finesses:
        cav = CavitySetup(COOL_LENGTH, COOL_WAIST, WAVELENGTH, finesse=float(f))
        n1 = trap.trap_photon_number(s, cav, COOL_FREQ)
        assembled = noise.shot_noise_heating(tp, cav, n1).n_osc
        rows.append((float(f), noise.shot_noise_oscillations(s, cav, COOL_FREQ), assembled))
    return rows


def fig_5(outdir):
    rows = shot_noise_curve(np.geomspace(1e3, 1e5, 21))
    return [write_table(Path(outdir) / "fig5.csv", ["finesse", "N_osc_shot_noise", "N_osc_assembled"], rows,
                        _meta("5"))]


def lamb_dicke_curve(radii_nm=LAMB_DICKE_RADII_NM):
    return [(float(r), sidebands.lamb_dicke_check(high_index(r * 1e-9), LAMB_DICKE_FREQ, WAVELENGTH).eta)
            for r in radii_nm]


def fig_6(outdir):
    rows = lamb_dicke_curve()
    return [write_table(Path(outdir) / "fig6.csv", ["r_nm", "eta"], rows, _meta("6", penalty_dB=1))]


FIGURES = {"1c": fig_1c, "1d": fig_1d, "2a": fig_2a, "2b": fig_2b, "2c": fig_2c,
           "3": fig_3, "4": fig_4, "5": fig_5, "6": fig_6}
