"""Physical constants, unit handling and the configuration types shared by
every other module.

Everything internal is strict SI, with all angular frequencies in rad/s.
Convenience units (Torr, W/um^2, nm, MHz, dB) are only accepted through
:func:`convert` at the edges of the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import constants as _sc

HBAR = _sc.hbar
C = _sc.c
KB = _sc.k
EPS0 = _sc.epsilon_0
MU0 = _sc.mu_0
AMU = _sc.atomic_mass
TORR = 133.322  # Pa

AIR_MASS = 28.97 * AMU
DIATOMIC_GAMMA = 7.0 / 5.0


def clausius_mossotti(eps):
    """Return (eps - 1)/(eps + 2), with the conductor limit 1 for infinite eps."""
    eps = complex(eps)
    if math.isinf(eps.real):
        return 1.0 + 0.0j
    return (eps - 1.0) / (eps + 2.0)


@dataclass(frozen=True)
class Sphere:
    """Dielectric sphere.

    ``eps_real = math.inf`` selects the high-index preset in which the
    Clausius-Mossotti factor is exactly one.  ``bb_factor`` is
    Im[(eps_bb - 1)/(eps_bb + 2)] averaged over the blackbody spectrum.
    """

    radius: float
    density: float = 2000.0
    eps_real: float = 2.0
    eps_imag: float = 0.0
    bb_factor: float = 0.1

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if not self.density > 0:
            raise ValueError(f"density must be positive, got {self.density}")
        if not self.eps_real > 1:
            raise ValueError(f"Re eps must exceed 1, got {self.eps_real}")
        if self.eps_imag < 0:
            raise ValueError(f"Im eps must be non-negative, got {self.eps_imag}")
        if not 0 <= self.bb_factor <= 1:
            raise ValueError(f"bb_factor must lie in [0, 1], got {self.bb_factor}")

    @classmethod
    def high_index(cls, radius, density=2000.0, bb_factor=0.1):
        return cls(radius=radius, density=density, eps_real=math.inf, bb_factor=bb_factor)

    @property
    def eps(self):
        return complex(self.eps_real, self.eps_imag)

    @property
    def volume(self):
        return 4.0 / 3.0 * math.pi * self.radius**3

    @property
    def mass(self):
        return self.density * self.volume

    @property
    def cm(self):
        """Complex Clausius-Mossotti factor (eps - 1)/(eps + 2)."""
        return clausius_mossotti(self.eps)

    @property
    def cm_imag(self):
        # exact identity Im[(e-1)/(e+2)] = 3 Im e / |e+2|^2
        if math.isinf(self.eps_real):
            return 0.0
        return 3.0 * self.eps_imag / abs(self.eps + 2.0) ** 2

    def with_radius(self, radius):
        return Sphere(radius, self.density, self.eps_real, self.eps_imag, self.bb_factor)


@dataclass(frozen=True)
class CavitySetup:
    """Fabry-Perot cavity geometry.

    Exactly one of ``finesse`` and ``linewidth`` must be given; the other is
    derived from F = pi c / (2 kappa L).  ``loss_linewidth`` is the part of
    the linewidth due to scattering and absorption.
    """

    length: float
    waist: float
    wavelength: float = 1e-6
    finesse: float | None = None
    linewidth: float | None = None
    loss_linewidth: float = 0.0

    def __post_init__(self):
        for name in ("length", "waist", "wavelength"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if (self.finesse is None) == (self.linewidth is None):
            raise ValueError("give exactly one of finesse and linewidth")
        if self.finesse is None:
            object.__setattr__(self, "finesse", finesse_from_linewidth(self.linewidth, self.length))
        else:
            object.__setattr__(self, "linewidth", linewidth_from_finesse(self.finesse, self.length))
        if not self.finesse > 0:
            raise ValueError("finesse must be positive")
        if not 0 <= self.loss_linewidth <= self.linewidth:
            raise ValueError("loss_linewidth must lie in [0, linewidth]")

    @property
    def kappa(self):
        return self.linewidth

    @property
    def mode_volume(self):
        return math.pi / 4.0 * self.length * self.waist**2

    @property
    def k(self):
        return 2.0 * math.pi / self.wavelength

    @property
    def omega(self):
        return C * self.k

    def with_finesse(self, finesse):
        return CavitySetup(self.length, self.waist, self.wavelength, finesse=finesse,
                           loss_linewidth=self.loss_linewidth)

    def with_linewidth(self, linewidth):
        return CavitySetup(self.length, self.waist, self.wavelength, linewidth=linewidth,
                           loss_linewidth=self.loss_linewidth)


def linewidth_from_finesse(finesse, length):
    return math.pi * C / (2.0 * finesse * length)


def finesse_from_linewidth(linewidth, length):
    return math.pi * C / (2.0 * linewidth * length)


def round_trip_loss_linewidth(loss, length):
    """Energy decay rate (rad/s) from a fractional loss per round trip."""
    return loss * C / (2.0 * length)


@dataclass(frozen=True)
class DriveConfig:
    trap_intensity: float
    cooling_ratio: float = 0.0
    cooling_detuning: float = 0.0
    parametric_strength: float = 0.0
    threshold_offset: float = 0.0

    def __post_init__(self):
        if self.trap_intensity < 0:
            raise ValueError("trap intensity must be non-negative")
        if not 0 <= self.cooling_ratio < 1:
            raise ValueError("cooling ratio zeta must lie in [0, 1)")
        if self.parametric_strength < 0:
            raise ValueError("parametric strength must be non-negative")
        if not 0 <= self.threshold_offset < 1:
            raise ValueError("threshold offset must lie in [0, 1)")


@dataclass(frozen=True)
class Environment:
    """Background gas.  Defaults describe room-temperature air."""

    pressure: float = 0.0
    temperature: float = 300.0
    molecular_mass: float = AIR_MASS
    gamma_sh: float = DIATOMIC_GAMMA
    alpha_g: float = 0.25
    alpha_theta: float = 1.0

    def __post_init__(self):
        if self.pressure < 0:
            raise ValueError("pressure must be non-negative")
        if not self.temperature > 0:
            raise ValueError("temperature must be positive")
        if not self.molecular_mass > 0:
            raise ValueError("molecular mass must be positive")
        if not self.gamma_sh > 1:
            raise ValueError("specific heat ratio must exceed 1")
        if not 0 <= self.alpha_g <= 1 or not 0 <= self.alpha_theta <= 1:
            raise ValueError("accommodation coefficients must lie in [0, 1]")

    @property
    def mean_speed(self):
        return math.sqrt(8.0 * KB * self.temperature / (math.pi * self.molecular_mass))

    @property
    def rms_speed(self):
        return math.sqrt(3.0 * KB * self.temperature / self.molecular_mass)

    def with_pressure(self, pressure):
        return Environment(pressure, self.temperature, self.molecular_mass, self.gamma_sh,
                           self.alpha_g, self.alpha_theta)


def polarizability(sphere):
    """Complex point-dipole polarizability 3 eps0 V (eps-1)/(eps+2), in C m^2/V."""
    return 3.0 * EPS0 * sphere.volume * sphere.cm


def bulk_loss_to_im_eps(loss_db_per_km, re_eps, wavelength):
    """Imaginary permittivity that reproduces a bulk attenuation in dB/km.

    Uses alpha = 2 k Im sqrt(eps) with Im sqrt(eps) ~ Im eps / (2 sqrt(Re eps)).
    """
    if loss_db_per_km < 0:
        raise ValueError("loss must be non-negative")
    if not re_eps > 1:
        raise ValueError("Re eps must exceed 1")
    alpha = loss_db_per_km * math.log(10.0) / 10.0 / 1000.0
    return alpha * math.sqrt(re_eps) * wavelength / (2.0 * math.pi)


# factor to SI for each convenience unit, keyed by (unit, SI unit)
_LINEAR = {
    ("Torr", "Pa"): TORR,
    ("W/um2", "W/m2"): 1e12,
    ("nm", "m"): 1e-9,
    ("um", "m"): 1e-6,
    ("MHz", "rad/s"): 2.0 * math.pi * 1e6,
    ("K", "J"): KB,
}


def convert(value, from_unit, to_unit):
    """Convert between a convenience unit and SI.

    Supported pairs (either direction): Torr/Pa, W/um2/W/m2, nm/m, um/m,
    MHz/rad/s (cyclic MHz to angular), K/J (times k_B) and dB/ratio (power).

    >>> convert(1e-10, "Torr", "Pa")
    1.33322e-08
    """
    if (from_unit, to_unit) in _LINEAR:
        return value * _LINEAR[from_unit, to_unit]
    if (to_unit, from_unit) in _LINEAR:
        return value / _LINEAR[to_unit, from_unit]
    if (from_unit, to_unit) == ("dB", "ratio"):
        return 10.0 ** (np.asarray(value) / 10.0) if np.ndim(value) else 10.0 ** (value / 10.0)
    if (from_unit, to_unit) == ("ratio", "dB"):
        if np.any(np.asarray(value) <= 0):
            raise ValueError("ratio must be positive to express in dB")
        return 10.0 * np.log10(value) if np.ndim(value) else 10.0 * math.log10(value)
    raise ValueError(f"unsupported conversion {from_unit!r} -> {to_unit!r}")


def to_db(ratio):
    return convert(ratio, "ratio", "dB")
