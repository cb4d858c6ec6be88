"""Exact axial force on a dielectric sphere in a free-space standing wave.

The standing wave x E0 cos k(z - z0) is split into two counter-propagating
plane waves of amplitude E0/2.  Each is scattered with the usual Mie
coefficients (Bohren & Huffman conventions, time factor exp(-i w t)) and the
time-averaged Maxwell stress tensor of the total field is integrated over a
sphere enclosing the particle.

Internally lengths are measured in units of 1/k, fields in units of E0
(magnetic fields as c B) and forces in units of eps0 E0^2 / k^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .io import write_table
from .physcore import EPS0, Sphere, clausius_mossotti
from .specfun import angular_functions, derivative_ratio, riccati_psi, riccati_xi, spherical_h1_all, spherical_jn_all

AUDIT_TOL = 1e-10


class ConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class StandingWaveField:
    amplitude: float = 1.0
    wavelength: float = 1e-6

    def __post_init__(self):
        if not (self.amplitude > 0 and self.wavelength > 0):
            raise ValueError("amplitude and wavelength must be positive")

    @property
    def k(self):
        return 2.0 * math.pi / self.wavelength

    @property
    def force_unit(self):
        return EPS0 * self.amplitude**2 / self.k**2


@dataclass(frozen=True)
class MieSolution:
    size_parameter: float
    eps: complex
    a: np.ndarray
    b: np.ndarray
    residual: float

    @property
    def n_max(self):
        return len(self.a)

    @property
    def rho_size(self):
        return self.size_parameter * abs(np.sqrt(self.eps))


def n_max_heuristic(x):
    return int(math.ceil(x + 4.0 * x ** (1.0 / 3.0) + 2.0))


def mie_coefficients(x, eps, n_max):
    """Electric (a_n) and magnetic (b_n) scattering coefficients, n = 1..n_max."""
    m = np.sqrt(complex(eps))
    psi, dpsi = riccati_psi(n_max, np.array(x, float))
    xi, dxi = riccati_xi(n_max, np.array(x, float))
    psim, dpsim = riccati_psi(n_max, np.array(m * x))
    s = slice(1, None)
    a = (m * psim[s] * dpsi[s] - psi[s] * dpsim[s]) / (m * psim[s] * dxi[s] - xi[s] * dpsim[s])
    b = (psim[s] * dpsi[s] - m * psi[s] * dpsim[s]) / (psim[s] * dxi[s] - m * xi[s] * dpsim[s])
    return a, b


def _audit(a, b):
    top = max(abs(a[0]), abs(b[0]))
    if top == 0:
        return 0.0
    return float(max(abs(a[-1]), abs(b[-1])) / top)


def mie_solve_size(x, eps, tol=AUDIT_TOL, max_extra=40):
    """Mie coefficients for size parameter x = kr, grown past the heuristic until the audit passes."""
    if not x > 0:
        raise ValueError("size parameter must be positive")
    if not np.real(eps) > 0:
        raise ValueError("need Re eps > 0")
    n0 = n_max_heuristic(x)
    for n in range(n0, n0 + max_extra + 1):
        a, b = mie_coefficients(x, eps, n)
        res = _audit(a, b)
        if res < tol:
            return MieSolution(float(x), complex(eps), a, b, res)
    raise ConvergenceError(f"multipole series not converged: residual {res:.3g} at n_max={n}")


def mie_solve(sphere: Sphere, field: StandingWaveField, tol=AUDIT_TOL):
    if math.isinf(sphere.eps_real):
        raise ValueError("the multipole solver needs a finite permittivity")
    return mie_solve_size(field.k * sphere.radius, sphere.eps, tol)


def dipole_force(sphere: Sphere, field: StandingWaveField, z0):
    """F_z = (1/4) Re(alpha) E0^2 k sin(2 k z0) on a sphere at z = 0, in newtons.

    Positive z0 places the nearest antinode on the +z side, so the force is
    positive for small z0.
    """
    alpha = 3.0 * EPS0 * sphere.volume * sphere.cm
    return 0.25 * alpha.real * field.amplitude**2 * field.k * np.sin(2.0 * field.k * np.asarray(z0))


def dipole_force_reduced(x, eps, kz0):
    """Dipole force in units of eps0 E0^2 / k^2: pi x^3 Re[(eps-1)/(eps+2)] sin(2 k z0)."""
    return math.pi * x**3 * clausius_mossotti(eps).real * np.sin(2.0 * np.asarray(kz0))


# --- fields -----------------------------------------------------------------

def _spherical(points):
    x, y, z = points.T
    r = np.sqrt(x * x + y * y + z * z)
    mu = np.clip(z / r, -1.0, 1.0)
    phi = np.arctan2(y, x)
    return r, mu, phi


def _basis(mu, phi):
    st = np.sqrt(1.0 - mu * mu)
    cp, sp = np.cos(phi), np.sin(phi)
    rhat = np.stack([st * cp, st * sp, mu], -1)
    that = np.stack([mu * cp, mu * sp, -st], -1)
    phat = np.stack([-sp, cp, np.zeros_like(mu)], -1)
    return rhat, that, phat


def _vsh_sum(z, rho, mu, phi, c_ne, c_mo, c_no, c_me):
    """Sum of c_ne N_e1n + c_mo M_o1n + c_no N_o1n + c_me M_e1n in Cartesian components.

    ``z`` holds the radial functions z_0..z_N at rho; coefficients have length N.
    """
    n_max = len(c_ne)
    pi, tau = angular_functions(n_max, mu)
    zn = z[1:n_max + 1]
    dz = derivative_ratio(z, rho)[1:n_max + 1]
    n = np.arange(1, n_max + 1)[:, None]
    st = np.sqrt(1.0 - mu * mu)
    cp, sp = np.cos(phi), np.sin(phi)
    col = lambda c: np.asarray(c)[:, None]  # noqa: E731
    radial = n * (n + 1) * st * pi * zn / rho
    e_r = np.sum((col(c_ne) * cp + col(c_no) * sp) * radial, 0)
    e_t = np.sum((col(c_ne) * cp + col(c_no) * sp) * tau * dz
                 + (col(c_mo) * cp - col(c_me) * sp) * pi * zn, 0)
    e_p = np.sum((-col(c_ne) * sp + col(c_no) * cp) * pi * dz
                 + (-col(c_mo) * sp - col(c_me) * cp) * tau * zn, 0)
    rhat, that, phat = _basis(mu, phi)
    return e_r[:, None] * rhat + e_t[:, None] * that + e_p[:, None] * phat


def _en(n_max):
    n = np.arange(1, n_max + 1)
    return (1j ** n) * (2 * n + 1) / (n * (n + 1))


def incident_fields(points):
    """Exact unit plane wave along +z, polarised along x: (E, cB) at Cartesian points."""
    ph = np.exp(1j * points[:, 2])
    zero = np.zeros_like(ph)
    return np.stack([ph, zero, zero], -1), np.stack([zero, ph, zero], -1)


def incident_fields_vsh(points, n_max):
    """Multipole expansion of :func:`incident_fields`, for validating the harmonics."""
    r, mu, phi = _spherical(points)
    j = spherical_jn_all(n_max + 1, r)
    en = _en(n_max)
    e = _vsh_sum(j, r, mu, phi, -1j * en, en, 0 * en, 0 * en)
    b = _vsh_sum(j, r, mu, phi, 0 * en, 0 * en, -1j * en, -en)
    return e, b


def scattered_fields(sol: MieSolution, points):
    r, mu, phi = _spherical(points)
    h = spherical_h1_all(sol.n_max + 1, r)
    en = _en(sol.n_max)
    e = _vsh_sum(h, r, mu, phi, 1j * en * sol.a, -en * sol.b, 0 * en, 0 * en)
    b = _vsh_sum(h, r, mu, phi, 0 * en, 0 * en, 1j * en * sol.b, en * sol.a)
    return e, b


def plane_wave_total(sol: MieSolution, points):
    ei, bi = incident_fields(points)
    es, bs = scattered_fields(sol, points)
    return ei + es, bi + bs


# --- stress tensor ---------------------------------------------------------

def quadrature_orders(sol: MieSolution, radius):
    n_theta = 2 * sol.n_max + 4 + int(2.0 * radius) + 16
    return n_theta, 4 * sol.n_max + 4


def surface_grid(radius, n_theta, n_phi):
    mu, w = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    mm, pp = np.meshgrid(mu, phi, indexing="ij")
    ww = np.repeat(w[:, None], n_phi, 1) * (2.0 * math.pi / n_phi) * radius**2
    st = np.sqrt(1.0 - mm * mm)
    normal = np.stack([st * np.cos(pp), st * np.sin(pp), mm], -1).reshape(-1, 3)
    return normal * radius, normal, ww.ravel()


def _fz(e, b, normal, weights):
    er = np.sum(e * normal, 1)
    br = np.sum(b * normal, 1)
    dens = np.sum(np.abs(e) ** 2, 1) + np.sum(np.abs(b) ** 2, 1)
    f = 0.5 * np.real(e[:, 2] * np.conj(er) + b[:, 2] * np.conj(br)) - 0.25 * dens * normal[:, 2]
    return float(np.sum(f * weights))


_FLIP = np.array([1.0, -1.0, -1.0])


def _wave_pair(sol, points):
    # wave 2 travels along -z: E2(r) = R E1(R r) with R = diag(1, -1, -1)
    e1, b1 = plane_wave_total(sol, points)
    e2, b2 = plane_wave_total(sol, points * _FLIP)
    return e1, b1, e2 * _FLIP, b2 * _FLIP


def standing_wave_force_reduced(sol: MieSolution, kz0, surface_radius=None, n_theta=None, n_phi=None):
    """F_z in units of eps0 E0^2/k^2 for each kz0; surface_radius in units of the sphere radius."""
    kz0 = np.atleast_1d(np.asarray(kz0, float))
    rs = sol.size_parameter * (1.5 if surface_radius is None else surface_radius)
    if rs < sol.size_parameter:
        raise ValueError("integration surface must enclose the sphere")
    nt, npf = quadrature_orders(sol, rs)
    nt, npf = n_theta or nt, n_phi or npf
    points, normal, weights = surface_grid(rs, nt, npf)
    e1, b1, e2, b2 = _wave_pair(sol, points)
    out = np.empty(kz0.size)
    for i, z0 in enumerate(kz0):
        c1, c2 = 0.5 * np.exp(-1j * z0), 0.5 * np.exp(1j * z0)
        out[i] = _fz(c1 * e1 + c2 * e2, c1 * b1 + c2 * b2, normal, weights)
    return out


def single_wave_force_reduced(sol: MieSolution, surface_radius=None):
    """Radiation-pressure force of one unit plane wave (for checks against the optical theorem)."""
    rs = sol.size_parameter * (1.5 if surface_radius is None else surface_radius)
    points, normal, weights = surface_grid(rs, *quadrature_orders(sol, rs))
    e, b = plane_wave_total(sol, points)
    return _fz(e, b, normal, weights)


def pressure_cross_section(sol: MieSolution):
    """C_pr k^2 = k^2 (C_ext - g C_sca) from the coefficients alone."""
    a, b = sol.a, sol.b
    n = np.arange(1, sol.n_max + 1)
    c_ext = 2.0 * math.pi * np.sum((2 * n + 1) * np.real(a + b))
    n1 = n[:-1]
    g = 4.0 * math.pi * (np.sum(n1 * (n1 + 2) / (n1 + 1) * np.real(a[:-1] * np.conj(a[1:]) + b[:-1] * np.conj(b[1:])))
                         + np.sum((2 * n + 1) / (n * (n + 1)) * np.real(a * np.conj(b))))
    return float(c_ext - g)


@dataclass(frozen=True)
class StressForce:
    force: float
    quad_error: float
    converged: bool


def stress_tensor_force(sol: MieSolution, field: StandingWaveField, z0, surface_radius=1.5,
                        order_scale=1, rtol=1e-8):
    """Time-averaged F_z in newtons on a sphere at the origin; node offset z0 in metres.

    The quadrature is repeated at doubled angular order to estimate its error.
    """
    kz0 = field.k * z0
    nt, npf = quadrature_orders(sol, sol.size_parameter * surface_radius)
    f1 = standing_wave_force_reduced(sol, kz0, surface_radius, nt * order_scale, npf * order_scale)[0]
    f2 = standing_wave_force_reduced(sol, kz0, surface_radius, 2 * nt * order_scale, 2 * npf * order_scale)[0]
    err = abs(f2 - f1)
    scale = max(abs(f2), dipole_force_reduced(sol.size_parameter, sol.eps, math.pi / 4))
    u = field.force_unit
    return StressForce(f2 * u, err * u, err <= rtol * scale)


# --- comparison sweep -------------------------------------------------------

@dataclass
class ForceCurve:
    rho_size: float
    kz0: np.ndarray
    exact: np.ndarray
    dipole: np.ndarray
    n_max: int

    @property
    def max_deviation(self):
        return float(np.max(np.abs(self.exact - self.dipole)))

    @property
    def peak_ratio(self):
        """Dipole peak over exact peak."""
        return float(np.max(np.abs(self.dipole)) / np.max(np.abs(self.exact)))

    @property
    def sign_flips(self):
        tiny = 1e-9
        mask = (np.abs(self.exact) > tiny) & (np.abs(self.dipole) > tiny)
        return int(np.sum(np.sign(self.exact[mask]) != np.sign(self.dipole[mask])))


def force_comparison_sweep(rho_sizes, kz0, eps=2.0, surface_radius=1.5):
    """Exact and dipole force curves, both normalised to the dipole peak."""
    rho_sizes = np.atleast_1d(np.asarray(rho_sizes, float))
    kz0 = np.atleast_1d(np.asarray(kz0, float))
    if rho_sizes.size == 0 or kz0.size == 0:
        raise ValueError("grids must be nonempty")
    curves = []
    for rho in rho_sizes:
        x = rho / abs(np.sqrt(eps))
        sol = mie_solve_size(x, eps)
        peak = dipole_force_reduced(x, eps, math.pi / 4)
        exact = standing_wave_force_reduced(sol, kz0, surface_radius) / peak
        curves.append(ForceCurve(float(rho), kz0, exact, dipole_force_reduced(x, eps, kz0) / peak, sol.n_max))
    return curves


def write_force_csv(path, curves, meta=None):
    rows = [(c.rho_size, z, fe, fd) for c in curves for z, fe, fd in zip(c.kz0, c.exact, c.dipole)]
    return write_table(path, ["rho_size", "k_z0", "F_exact_arb", "F_dipole_arb"], rows, meta)
