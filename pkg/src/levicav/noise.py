"""Motional heating and decoherence channels.

Every channel is reported both as a rate and as N_osc, the number of
coherent oscillations expected before a single quantum jump out of the
ground state.  Single-phonon channels use N_osc = omega_m / (2 pi rate);
parametric (n -> n+2) channels use the 0 -> 2 jump rate instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .physcore import C, HBAR, KB, CavitySetup, Environment, Sphere
from .trap import TrapParams, optomech_coupling

MOLECULAR_DIAMETER = 0.37e-9  # m, air-like; gives lambda_mfp ~ 50-100 um at 1 Torr
NO_GAS_LIMIT = "no-gas-limit"


@dataclass(frozen=True)
class GasDamping:
    rate: float
    mean_free_path: float
    free_molecular: bool


@dataclass(frozen=True)
class GasHeating:
    tau: float
    quality: float
    n_osc: float
    collision_rate: float
    status: str = "ok"


@dataclass(frozen=True)
class ShotNoise:
    spectral_density: float
    rate: float
    n_osc: float


@dataclass(frozen=True)
class Anisotropy:
    eps_theta: float
    rate_ratio: float
    rotational_damping: float
    omega_rot_sq: float


@dataclass
class NoiseBudget:
    gamma_g: float
    tau_g: float
    q_g: float
    collision_rate: float
    gamma_sc: float
    gamma_bb: float
    rate_shot_noise: float
    rate_anisotropy: float
    n_osc: dict = field(default_factory=dict)
    free_molecular: bool = True

    @property
    def dominant(self):
        """Channel with the fewest coherent oscillations."""
        return min(self.n_osc, key=self.n_osc.get)


def mean_free_path(env: Environment, diameter=MOLECULAR_DIAMETER):
    if env.pressure == 0:
        return math.inf
    return KB * env.temperature / (math.sqrt(2.0) * math.pi * diameter**2 * env.pressure)


def gas_damping(sphere: Sphere, env: Environment):
    """Epstein momentum damping gamma_g = 2 (8/pi) P / (vbar r rho).

    The free-molecular formula is always evaluated; ``free_molecular`` is
    False when the mean free path is shorter than ten radii.
    """
    rate = 2.0 * (8.0 / math.pi) * env.pressure / (env.mean_speed * sphere.radius * sphere.density)
    mfp = mean_free_path(env)
    return GasDamping(rate, mfp, mfp >= 10.0 * sphere.radius)


def gas_heating(sphere: Sphere, env: Environment, omega_m):
    gamma = gas_damping(sphere, env).rate
    coll = math.pi * env.pressure * env.mean_speed * sphere.radius**2 / (KB * env.temperature)
    if gamma == 0:
        return GasHeating(math.inf, math.inf, math.inf, coll, NO_GAS_LIMIT)
    tau = HBAR * omega_m / (gamma * KB * env.temperature)
    return GasHeating(tau, omega_m / gamma, omega_m * tau / (2.0 * math.pi), coll)


def recoil_jump_rate(trap: TrapParams):
    """Photon-recoil jump rate gamma_sc = (2/5)(omega_r/omega_m) R_sc and its N_osc."""
    gamma = 0.4 * trap.recoil_frequency / trap.omega_m * trap.scatter_rate
    n_osc = trap.omega_m / (2.0 * math.pi * gamma) if gamma > 0 else math.inf
    return gamma, n_osc


def recoil_oscillations(sphere: Sphere, wavelength):
    """Closed form N_osc^(sc) = (5 / 8 pi^3) ((eps+2)/(eps-1)) lambda^3 / V."""
    return 5.0 / (8.0 * math.pi**3) / sphere.cm.real * wavelength**3 / sphere.volume


def shot_noise_spectrum(omega, photon_number, kappa):
    """Relative photon-number noise S(omega) of a resonantly driven cavity."""
    return 4.0 * kappa / (math.pi * photon_number * (kappa**2 + 4.0 * omega**2))


def shot_noise_heating(trap: TrapParams, cavity: CavitySetup, photon_number):
    if not photon_number > 0:
        raise ValueError("photon number must be positive")
    wm = trap.omega_m
    s = shot_noise_spectrum(2.0 * wm, photon_number, cavity.kappa)
    rate = math.pi * wm**2 / 16.0 * s * 2.0
    return ShotNoise(s, rate, wm / (2.0 * math.pi * rate))


def shot_noise_oscillations(sphere: Sphere, cavity: CavitySetup, omega_m):
    """Closed form of the shot-noise N_osc at the photon number set by omega_m."""
    kappa = cavity.kappa
    k = cavity.k
    return (1.0 / sphere.cm.real * cavity.mode_volume * sphere.density
            / (3.0 * math.pi * C * HBAR * k**3) * omega_m / kappa * (kappa**2 + 16.0 * omega_m**2))


def blackbody_jump_rate(sphere: Sphere, temperature, omega_m):
    """Recoil jump rate from absorbing (or, with T -> T_int, emitting) blackbody light."""
    if not temperature > 0:
        raise ValueError("temperature must be positive")
    kt = KB * temperature
    return (2.0 * math.pi**4 / 63.0 * kt**6 / (C**5 * HBAR**5 * sphere.density * omega_m)
            * sphere.bb_factor)


def blackbody_oscillations(sphere: Sphere, t_env, t_int, omega_m):
    gamma = blackbody_jump_rate(sphere, t_env, omega_m) + blackbody_jump_rate(sphere, t_int, omega_m)
    return omega_m / (2.0 * math.pi * gamma) if gamma > 0 else math.inf


def equipartition_rotation(sphere: Sphere, temperature):
    """<omega_rot^2> = k_B T / I_theta with I_theta = (2/5) m r^2."""
    inertia = 0.4 * sphere.mass * sphere.radius**2
    return KB * temperature / inertia


def anisotropy_heating(aspect, sphere: Sphere, env: Environment, omega_m, omega_rot_sq=None):
    """Parametric heating from rotation of a slightly prolate spheroid.

    Returns the trap-frequency modulation depth eps_theta, the ground-state
    jump rate R_{0->2} divided by omega_m (Gaussian phase approximation,
    small rotational damping) and the gas rotational damping rate.
    """
    if aspect < 1:
        raise ValueError("aspect ratio a/b must be >= 1 (prolate convention)")
    if omega_rot_sq is None:
        omega_rot_sq = equipartition_rotation(sphere, env.temperature)
    eps_theta = 9.0 / 40.0 * sphere.cm.real * (aspect ** (4.0 / 3.0) - 1.0)
    w_rms = math.sqrt(omega_rot_sq)
    ratio = (eps_theta**2 * math.sqrt(2.0 * math.pi) * omega_m / (8.0 * w_rms)
             * math.exp(-(omega_m**2) / (2.0 * omega_rot_sq)))
    damping = (5.0 * math.sqrt(3.0 / (2.0 * math.pi)) * env.alpha_theta * env.pressure
               / (env.rms_speed * sphere.radius * sphere.density))
    return Anisotropy(eps_theta, ratio, damping, omega_rot_sq)


def noise_budget(sphere: Sphere, env: Environment, trap: TrapParams, cavity: CavitySetup | None = None,
                 shot_noise=True, blackbody=True, aspect=None, omega_rot_sq=None, t_int=None):
    """Evaluate every enabled channel and collect their N_osc.

    Shot noise needs ``cavity``; anisotropy is included only when ``aspect``
    is given.  ``t_int`` defaults to the gas temperature.
    """
    wm = trap.omega_m
    damp = gas_damping(sphere, env)
    heat = gas_heating(sphere, env, wm)
    gamma_sc, n_sc = recoil_jump_rate(trap)
    n_osc = {"recoil": n_sc}
    if heat.status == "ok":
        n_osc["gas"] = heat.n_osc

    gamma_bb = 0.0
    if blackbody and sphere.bb_factor > 0:
        t_int = env.temperature if t_int is None else t_int
        gamma_bb = blackbody_jump_rate(sphere, env.temperature, wm) + blackbody_jump_rate(sphere, t_int, wm)
        n_osc["blackbody"] = wm / (2.0 * math.pi * gamma_bb)

    rate_sn = 0.0
    if shot_noise and cavity is not None:
        g = optomech_coupling(sphere, cavity)
        photons = trap.mass * wm**2 / (4.0 * HBAR * g * cavity.k**2)
        sn = shot_noise_heating(trap, cavity, photons)
        rate_sn = sn.rate
        n_osc["shot_noise"] = sn.n_osc

    rate_an = 0.0
    if aspect is not None:
        an = anisotropy_heating(aspect, sphere, env, wm, omega_rot_sq)
        rate_an = an.rate_ratio * wm
        if rate_an > 0:
            n_osc["anisotropy"] = wm / (2.0 * math.pi * rate_an)

    return NoiseBudget(
        gamma_g=damp.rate, tau_g=heat.tau, q_g=heat.quality, collision_rate=heat.collision_rate,
        gamma_sc=gamma_sc, gamma_bb=gamma_bb, rate_shot_noise=rate_sn, rate_anisotropy=rate_an,
        n_osc=n_osc, free_molecular=damp.free_molecular,
    )
