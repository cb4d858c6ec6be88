"""Internal temperature of a trapped sphere.

The equilibrium balances optical absorption against gas thermalisation and
blackbody exchange with the surroundings.  Only steady state is computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .io import write_table
from .physcore import C, HBAR, KB, Environment, Sphere

ZETA5 = 1.036927755
T_MAX = 1e5


class RunawayError(RuntimeError):
    """No equilibrium below T_MAX: the sphere melts or vaporises."""


@dataclass(frozen=True)
class ThermalState:
    t_int: float
    p_abs: float
    p_gas: float
    p_bb_net: float
    converged: bool
    residual: float


def absorbed_power(sphere: Sphere, intensity, wavelength):
    if intensity < 0:
        raise ValueError("intensity must be non-negative")
    return 12.0 * math.pi * intensity / wavelength * sphere.volume * sphere.cm_imag


def gas_cooling_power(sphere: Sphere, env: Environment, t_int):
    """Signed energy flow from the gas into the sphere (negative when hotter)."""
    if not t_int > 0:
        raise ValueError("t_int must be positive")
    g = env.gamma_sh
    return (-env.alpha_g * math.sqrt(2.0 / (3.0 * math.pi)) * math.pi * sphere.radius**2
            * env.pressure * env.rms_speed * (g + 1.0) / (g - 1.0) * (t_int / env.temperature - 1.0))


def blackbody_power(sphere: Sphere, temperature):
    """Blackbody power absorbed from a bath at ``temperature`` by a point-dipole sphere."""
    return (72.0 * ZETA5 / math.pi**2 * sphere.volume / (C**3 * HBAR**4) * sphere.bb_factor
            * (KB * temperature) ** 5)


def blackbody_net_power(sphere: Sphere, t_env, t_int):
    if not (t_env > 0 and t_int > 0):
        raise ValueError("temperatures must be positive")
    return blackbody_power(sphere, t_env) - blackbody_power(sphere, t_int)


def _balance(sphere, env, p_abs):
    def f(t):
        return p_abs + gas_cooling_power(sphere, env, t) + blackbody_net_power(sphere, env.temperature, t)
    return f


def equilibrium_temperature(sphere: Sphere, env: Environment, intensity, wavelength=1e-6,
                            t_max=T_MAX, xtol=1e-6):
    """Solve P_abs + P_gas(T) + P_bb(T) = 0 for T in [T_env, t_max].

    The balance falls monotonically in T, so a bracketed root is unique.
    Raises :class:`RunawayError` when the balance is still positive at t_max.
    """
    p_abs = absorbed_power(sphere, intensity, wavelength)
    f = _balance(sphere, env, p_abs)
    t_env = env.temperature
    if f(t_env) <= 0.0:
        t = t_env
    else:
        if f(t_max) > 0.0:
            raise RunawayError(f"no equilibrium below {t_max:g} K (absorbed {p_abs:.3g} W)")
        t = brentq(f, t_env, t_max, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)
    p_gas = gas_cooling_power(sphere, env, t)
    p_bb = blackbody_net_power(sphere, t_env, t)
    return ThermalState(t, p_abs, p_gas, p_bb, True, p_abs + p_gas + p_bb)


def temperature_map(sphere: Sphere, env: Environment, pressures, intensities, wavelength=1e-6):
    """Equilibrium temperature on a pressure x intensity grid.

    Returns ``(T, status)`` arrays of shape (len(pressures), len(intensities)).
    Runaway cells hold NaN with status "runaway".
    """
    pressures = np.atleast_1d(np.asarray(pressures, float))
    intensities = np.atleast_1d(np.asarray(intensities, float))
    if pressures.size == 0 or intensities.size == 0:
        raise ValueError("grids must be nonempty")
    temps = np.full((pressures.size, intensities.size), np.nan)
    status = np.full(temps.shape, "ok", dtype=object)
    for i, p in enumerate(pressures):
        e = env.with_pressure(p)
        for j, inten in enumerate(intensities):
            try:
                temps[i, j] = equilibrium_temperature(sphere, e, inten, wavelength).t_int
            except RunawayError:
                status[i, j] = "runaway"
    return temps, status


def write_temperature_csv(path, pressures, intensities, temps, status, meta=None):
    rows = [(p, inten, temps[i, j], status[i, j])
            for i, p in enumerate(pressures) for j, inten in enumerate(intensities)]
    return write_table(path, ["pressure_Pa", "intensity_W_m2", "T_int_K", "status"], rows, meta)
