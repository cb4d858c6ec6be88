"""Optical dipole trap and opto-mechanical coupling of a point-dipole sphere."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .physcore import C, HBAR, KB, CavitySetup, Sphere


@dataclass(frozen=True)
class TrapParams:
    omega_m: float
    depth: float
    zero_point: float
    mass: float
    recoil_frequency: float
    scatter_rate: float
    coupling: float
    sphere_loss: float
    phi: float
    intensity: float
    wavelength: float

    @property
    def depth_kelvin(self):
        return self.depth / KB


def _k(wavelength):
    return 2.0 * math.pi / wavelength


def trap_frequency(sphere: Sphere, intensity, wavelength):
    """omega_m = sqrt(6 k^2 I0 Re[(eps-1)/(eps+2)] / (rho c)) at the antinode."""
    if intensity < 0:
        raise ValueError("intensity must be non-negative")
    k = _k(wavelength)
    return math.sqrt(6.0 * k**2 * intensity * sphere.cm.real / (sphere.density * C))


def intensity_for_frequency(sphere: Sphere, omega_m, wavelength):
    """Antinode intensity that produces the trap frequency omega_m."""
    k = _k(wavelength)
    return omega_m**2 * sphere.density * C / (6.0 * k**2 * sphere.cm.real)


def trap_depth(sphere: Sphere, intensity):
    """Total trap depth U0 = 3 I0 V Re[(eps-1)/(eps+2)] / c, in joules."""
    if intensity < 0:
        raise ValueError("intensity must be non-negative")
    return 3.0 * intensity * sphere.volume * sphere.cm.real / C


def optomech_coupling(sphere: Sphere, cavity: CavitySetup):
    """g = (3V / 4V_c) (eps-1)/(eps+2) omega, in rad/s."""
    return 0.75 * sphere.volume / cavity.mode_volume * sphere.cm.real * cavity.omega


def scattering_rate(sphere: Sphere, intensity, wavelength):
    """Photon scattering rate R_sc in 1/s."""
    if intensity < 0:
        raise ValueError("intensity must be non-negative")
    hw = HBAR * 2.0 * math.pi * C / wavelength
    return 48.0 * math.pi**3 * intensity * sphere.volume**2 / (wavelength**4 * hw) * abs(sphere.cm) ** 2


def sphere_cavity_loss(sphere: Sphere, cavity: CavitySetup):
    lam = cavity.wavelength
    return (12.0 * math.pi**2 * cavity.omega * sphere.volume**2 / (lam**3 * cavity.mode_volume)
            * abs(sphere.cm) ** 2)


def recoil_frequency(sphere: Sphere, wavelength):
    return HBAR * _k(wavelength) ** 2 / (2.0 * sphere.mass)


def recoil_parameter(sphere: Sphere, wavelength):
    """Dimensionless recoil parameter phi = (4 pi^2/5)(V/lambda^3)(eps-1)/(eps+2)."""
    return 4.0 * math.pi**2 / 5.0 * sphere.volume / wavelength**3 * sphere.cm.real


def zero_point_length(mass, omega_m):
    return math.sqrt(HBAR / (2.0 * mass * omega_m))


def trap_photon_number(sphere: Sphere, cavity: CavitySetup, omega_m):
    """Intra-cavity photon number of the trapping mode needed for omega_m.

    Follows from the linearised restoring force m omega_m^2 = 4 hbar g k^2 N1,
    equivalently N1 = 2 I0 V_c / (c hbar omega).
    """
    g = optomech_coupling(sphere, cavity)
    return sphere.mass * omega_m**2 / (4.0 * HBAR * g * cavity.k**2)


def photon_number_from_intensity(intensity, cavity: CavitySetup):
    return 2.0 * intensity * cavity.mode_volume / (C * HBAR * cavity.omega)


def trap_params(sphere: Sphere, intensity, wavelength=1e-6, cavity: CavitySetup | None = None):
    """Collect all trap quantities for one intensity.

    ``coupling`` and ``sphere_loss`` need a cavity and are zero without one.
    """
    omega_m = trap_frequency(sphere, intensity, wavelength)
    g = optomech_coupling(sphere, cavity) if cavity is not None else 0.0
    kappa_sc = sphere_cavity_loss(sphere, cavity) if cavity is not None else 0.0
    return TrapParams(
        omega_m=omega_m,
        depth=trap_depth(sphere, intensity),
        zero_point=zero_point_length(sphere.mass, omega_m) if omega_m > 0 else math.inf,
        mass=sphere.mass,
        recoil_frequency=recoil_frequency(sphere, wavelength),
        scatter_rate=scattering_rate(sphere, intensity, wavelength),
        coupling=g,
        sphere_loss=kappa_sc,
        phi=recoil_parameter(sphere, wavelength),
        intensity=intensity,
        wavelength=wavelength,
    )


def trap_for_frequency(sphere: Sphere, omega_m, wavelength=1e-6, cavity: CavitySetup | None = None):
    return trap_params(sphere, intensity_for_frequency(sphere, omega_m, wavelength), wavelength, cavity)
