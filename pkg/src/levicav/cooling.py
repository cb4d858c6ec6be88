"""Cavity sideband cooling of the centre-of-mass motion.

The linearised two-mode model treats the trapping mode as a harmonic
potential and the weaker cooling mode, detuned by delta2, as the cooling
channel with effective drive Omega_m = 2 g k x_m sqrt(N1) sqrt(2 zeta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .physcore import HBAR, KB, CavitySetup, Sphere
from .trap import optomech_coupling, recoil_parameter, trap_for_frequency, trap_photon_number, zero_point_length
from .noise import recoil_jump_rate

CONSTRAINT = 0.5  # upper bound on zeta, Omega_m/kappa and Omega_m/omega_m


@dataclass(frozen=True)
class CoolingConfig:
    omega_m: float
    kappa: float
    delta2: float
    zeta: float
    drive: float
    photons: float = math.nan
    wavenumber: float = math.nan

    def __post_init__(self):
        if not 0 <= self.zeta < 1:
            raise ValueError("zeta must lie in [0, 1)")

    @property
    def x0(self):
        """Shifted equilibrium position, k x0 = zeta."""
        return self.zeta / self.wavenumber

    @property
    def flags(self):
        return {
            "zeta": self.zeta <= CONSTRAINT,
            "drive/kappa": self.drive / self.kappa <= CONSTRAINT,
            "drive/omega_m": self.drive / self.omega_m <= CONSTRAINT,
        }


@dataclass(frozen=True)
class CoolingResult:
    gamma: float
    rate_minus: float
    rate_plus: float
    n_tilde: float
    n_f: float
    flags: dict


def drive_per_sqrt_zeta(sphere: Sphere, cavity: CavitySetup, omega_m):
    """Omega_m / sqrt(2 zeta) for the trap photon number fixed by omega_m."""
    g = optomech_coupling(sphere, cavity)
    xm = zero_point_length(sphere.mass, omega_m)
    n1 = trap_photon_number(sphere, cavity, omega_m)
    return 2.0 * g * cavity.k * xm * math.sqrt(n1)


def cooling_config(sphere: Sphere, cavity: CavitySetup, omega_m, delta2, zeta):
    amp = drive_per_sqrt_zeta(sphere, cavity, omega_m)
    return CoolingConfig(omega_m, cavity.kappa, delta2, zeta, amp * math.sqrt(2.0 * zeta),
                         trap_photon_number(sphere, cavity, omega_m), cavity.k)


def scattering_rates(cfg: CoolingConfig):
    """Anti-Stokes and Stokes rates and the net cooling rate Gamma = R_- - R_+."""
    k, d, w, om = cfg.kappa, cfg.delta2, cfg.omega_m, cfg.drive
    r_minus = k * om**2 / ((d + w) ** 2 + k**2 / 4.0)
    r_plus = k * om**2 / ((d - w) ** 2 + k**2 / 4.0)
    return r_minus, r_plus, r_minus - r_plus


def optimal_detuning(kappa, omega_m):
    return -0.5 * math.sqrt(kappa**2 + 4.0 * omega_m**2)


def sideband_limit(kappa, omega_m, delta2):
    """n_tilde = R_+ / Gamma; independent of the drive strength."""
    a = (delta2 + omega_m) ** 2 + kappa**2 / 4.0
    b = (delta2 - omega_m) ** 2 + kappa**2 / 4.0
    return a / (b - a)


def phonon_limit(cfg: CoolingConfig):
    """Sideband-limited occupation at cfg.delta2 and the optimal detuning."""
    if cfg.delta2 >= 0:
        raise ValueError("cooling requires delta2 < 0")
    _, rp, gamma = scattering_rates(cfg)
    if cfg.drive > 0 and gamma <= 0:
        raise ValueError("no net cooling at this configuration")
    return sideband_limit(cfg.kappa, cfg.omega_m, cfg.delta2), optimal_detuning(cfg.kappa, cfg.omega_m)


def steady_phonons(cfg: CoolingConfig, gamma_sc):
    rm, rp, gamma = scattering_rates(cfg)
    if not gamma > 0:
        raise ValueError("steady state needs Gamma > 0")
    return rp / gamma + gamma_sc / gamma


def evaluate(cfg: CoolingConfig, gamma_sc):
    rm, rp, gamma = scattering_rates(cfg)
    return CoolingResult(gamma, rm, rp, rp / gamma, (rp + gamma_sc) / gamma, cfg.flags)


def resolved_occupation(kappa_over_wm, phi):
    """<n_f> ~ (kappa/4 omega_m)^2 + phi omega_m/kappa in the resolved-sideband limit with Gamma = kappa."""
    return kappa_over_wm**2 / 16.0 + phi / kappa_over_wm


def resolved_optimum(phi):
    """(kappa/omega_m, <n_f>) minimising :func:`resolved_occupation`."""
    return 2.0 * phi ** (1.0 / 3.0), 0.75 * phi ** (2.0 / 3.0)


def final_temperature(n_f, omega_m):
    """Temperature of a thermal state with mean occupation n_f."""
    return HBAR * omega_m / (KB * math.log1p(1.0 / n_f))


@dataclass
class CoolingPoint:
    finesse: float
    kappa: float
    delta2: float = math.nan
    zeta: float = math.nan
    drive: float = math.nan
    gamma: float = math.nan
    n_tilde: float = math.nan
    n_f: float = math.nan
    n_tilde_min: float = math.nan
    status: str = "ok"
    active: list = field(default_factory=list)


def _max_drive(amp, kappa, omega_m):
    # n_f falls monotonically with Omega_m, so the best zeta is the largest allowed
    caps = {"zeta": amp * math.sqrt(2.0 * CONSTRAINT), "drive/kappa": CONSTRAINT * kappa,
            "drive/omega_m": CONSTRAINT * omega_m}
    name = min(caps, key=caps.get)
    return caps[name], name


def optimize_point(sphere: Sphere, cavity: CavitySetup, omega_m, gamma_sc=None, xatol=1e-9):
    """Minimise <n_f> over detuning and cooling-beam strength at one finesse."""
    kappa = cavity.kappa
    if gamma_sc is None:
        gamma_sc = recoil_jump_rate(trap_for_frequency(sphere, omega_m, cavity.wavelength))[0]
    amp = drive_per_sqrt_zeta(sphere, cavity, omega_m)
    pt = CoolingPoint(cavity.finesse, kappa)
    pt.n_tilde_min = sideband_limit(kappa, omega_m, optimal_detuning(kappa, omega_m))
    if amp <= 0:
        pt.status = "infeasible"
        return pt
    drive, active = _max_drive(amp, kappa, omega_m)
    zeta = (drive / amp) ** 2 / 2.0

    def nf(d):
        cfg = CoolingConfig(omega_m, kappa, d, zeta, drive)
        rm, rp, gamma = scattering_rates(cfg)
        return (rp + gamma_sc) / gamma if gamma > 0 else math.inf

    lo, hi = -(omega_m + 3.0 * kappa), -max(kappa / 10.0, omega_m / 100.0)
    res = minimize_scalar(nf, bounds=(lo, hi), method="bounded",
                          options={"xatol": xatol * omega_m, "maxiter": 500})
    cfg = CoolingConfig(omega_m, kappa, float(res.x), zeta, drive)
    out = evaluate(cfg, gamma_sc)
    pt.delta2, pt.zeta, pt.drive = cfg.delta2, zeta, drive
    pt.gamma, pt.n_tilde, pt.n_f = out.gamma, out.n_tilde, out.n_f
    pt.active = [active]
    return pt


def optimize_cooling(sphere: Sphere, length, waist, wavelength, omega_m, finesses):
    """Minimum <n_f> as a function of cavity finesse.

    Each point honours zeta, Omega_m/kappa, Omega_m/omega_m <= 1/2 and is
    optimised over the cooling detuning.  Points where no cooling is
    possible are returned with ``status = "infeasible"``.
    """
    finesses = np.atleast_1d(np.asarray(finesses, float))
    if finesses.size == 0:
        raise ValueError("finesse grid must be nonempty")
    gamma_sc = recoil_jump_rate(trap_for_frequency(sphere, omega_m, wavelength))[0]
    out = []
    for f in finesses:
        cav = CavitySetup(length, waist, wavelength, finesse=float(f))
        out.append(optimize_point(sphere, cav, omega_m, gamma_sc))
    return out


def best_finesse(sphere: Sphere, length, waist, wavelength, omega_m, bounds=(1e2, 1e7)):
    """Finesse that minimises the optimised <n_f> (searched in log F)."""
    gamma_sc = recoil_jump_rate(trap_for_frequency(sphere, omega_m, wavelength))[0]

    def obj(logf):
        cav = CavitySetup(length, waist, wavelength, finesse=10.0**logf)
        return optimize_point(sphere, cav, omega_m, gamma_sc).n_f

    res = minimize_scalar(obj, bounds=tuple(np.log10(bounds)), method="bounded",
                          options={"xatol": 1e-6})
    cav = CavitySetup(length, waist, wavelength, finesse=10.0**res.x)
    return optimize_point(sphere, cav, omega_m, gamma_sc)


def crossing_finesse(sphere: Sphere, length, waist, wavelength, omega_m, target=1.0, lo=1e2, hi=None):
    """Lowest finesse at which the optimised <n_f> falls to ``target``.

    ``hi`` defaults to the optimal finesse; the bracket must straddle the target.
    """
    gamma_sc = recoil_rate_for(sphere, omega_m, wavelength)
    if hi is None:
        hi = best_finesse(sphere, length, waist, wavelength, omega_m).finesse

    def f(logf):
        cav = CavitySetup(length, waist, wavelength, finesse=10.0**logf)
        return math.log(optimize_point(sphere, cav, omega_m, gamma_sc).n_f / target)

    return 10.0 ** brentq(f, math.log10(lo), math.log10(hi), xtol=1e-10)


def recoil_rate_for(sphere: Sphere, omega_m, wavelength):
    """gamma_sc = phi omega_m, the recoil jump rate at trap frequency omega_m."""
    return recoil_parameter(sphere, wavelength) * omega_m
