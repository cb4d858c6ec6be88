"""Frequency-domain quantum Langevin solver with non-secular couplings.

The cooling mode ``a`` and the mechanical mode ``b`` are written in a frame
rotating at the red sideband (delta2 = -omega_m).  The counter-rotating
terms exp(+-2i omega_m t) couple the Fourier components at
omega + 2 n omega_m; components with |n| > n_max are dropped.

Conventions
-----------
* X(t) = (2 pi)^-1/2 int dw exp(-i w t) X(w) and a^dag(w) := [a(-w)]^dag.
* Unknowns are ordered (a, a^dag, b, b^dag) per sideband, ascending n.
* Inputs are a_in(w + 2n w_m), a_in^dag(w + 2n w_m) per sideband, followed
  by the recoil force F at the odd offsets w + (2j+1) w_m.
* Spectra are symmetrised, S = (1/2)<{X(w), X(w)^dag}>, so vacuum has S = 1.
  Correlations between different sidebands only produce terms rotating
  at multiples of 2 w_m and are dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from .io import write_table
from .physcore import CavitySetup, Sphere, round_trip_loss_linewidth, to_db
from .trap import recoil_parameter, trap_photon_number, zero_point_length, optomech_coupling

A, AD, B, BD = range(4)
DELTA_T_FLOOR = 1e-9


class ThresholdError(ArithmeticError):
    """The linear system is singular, i.e. the drive sits on a parametric threshold."""


@dataclass(frozen=True)
class SidebandParams:
    """Parameters of one opto-mechanical system.

    ``drive`` is Omega_m; ``beta`` the parametric amplitude; ``phi`` the
    recoil parameter with force-noise strength phi * omega_m.
    """

    kappa: float
    drive: float
    omega_m: float = 1.0
    phi: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if not (self.kappa > 0 and self.omega_m > 0):
            raise ValueError("kappa and omega_m must be positive")
        if self.drive < 0 or self.phi < 0 or self.beta < 0:
            raise ValueError("drive, phi and beta must be non-negative")

    @property
    def gamma(self):
        """Weak-drive cooling rate 4 Omega_m^2 / kappa."""
        return 4.0 * self.drive**2 / self.kappa


def transfer_params(kappa_over_wm, phi=0.0, omega_m=1.0, delta_t=None):
    """Parameters with Gamma = kappa (Omega_m = kappa/2).

    With ``delta_t`` the parametric drive is beta = (Gamma/2)(1 - delta_t).
    """
    kappa = kappa_over_wm * omega_m
    beta = 0.0 if delta_t is None else 0.5 * kappa * (1.0 - max(delta_t, DELTA_T_FLOOR))
    return SidebandParams(kappa, kappa / 2.0, omega_m, phi, beta)


@dataclass
class SidebandSystem:
    params: SidebandParams
    n_max: int = 1
    secular: bool = False
    sidebands: list = field(init=False)
    force_offsets: list = field(init=False)

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")
        self.sidebands = list(range(-self.n_max, self.n_max + 1))
        self.force_offsets = list(range(-2 * self.n_max - 1, 2 * self.n_max + 2, 2))

    @property
    def size(self):
        return 4 * len(self.sidebands)

    @property
    def n_inputs(self):
        return 2 * len(self.sidebands) + len(self.force_offsets)

    def unknown(self, kind, n):
        return 4 * (n + self.n_max) + kind

    def input_a(self, n, dagger=False):
        return 2 * (n + self.n_max) + int(dagger)

    def input_force(self, offset):
        return 2 * len(self.sidebands) + self.force_offsets.index(offset)

    def labels(self):
        names = ("a", "a+", "b", "b+")
        return [f"{names[k]}({n:+d})" for n in self.sidebands for k in range(4)]

    def matrices(self, omega):
        """Coefficient matrix M and input map N with M x = N eta at base frequency omega."""
        p = self.params
        nm = self.n_max
        M = np.zeros((self.size, self.size), complex)
        N = np.zeros((self.size, self.n_inputs), complex)
        ns = 0.0 if self.secular else 1.0
        rk = math.sqrt(p.kappa)
        u = self.unknown

        def add(row, kind, n, val):
            if -nm <= n <= nm:
                M[row, u(kind, n)] += val

        for n in self.sidebands:
            wn = omega + 2.0 * n * p.omega_m
            ia, iad, ib, ibd = (u(k, n) for k in range(4))
            # (kappa/2 - i w) a + i Om (b + b^dag(n+1)) = sqrt(kappa) a_in
            M[ia, ia] = p.kappa / 2.0 - 1j * wn
            add(ia, B, n, 1j * p.drive)
            add(ia, BD, n + 1, 1j * p.drive * ns)
            N[ia, self.input_a(n)] = rk
            M[iad, iad] = p.kappa / 2.0 - 1j * wn
            add(iad, BD, n, -1j * p.drive)
            add(iad, B, n - 1, -1j * p.drive * ns)
            N[iad, self.input_a(n, True)] = rk
            # -i w b + i Om (a + a^dag(n+1)) - beta b^dag + beta (b(n+1) - b(n-1)) = i F(2n+1)
            M[ib, ib] = -1j * wn
            add(ib, A, n, 1j * p.drive)
            add(ib, AD, n + 1, 1j * p.drive * ns)
            add(ib, BD, n, -p.beta)
            add(ib, B, n + 1, p.beta * ns)
            add(ib, B, n - 1, -p.beta * ns)
            N[ib, self.input_force(2 * n + 1)] = 1j
            M[ibd, ibd] = -1j * wn
            add(ibd, AD, n, -1j * p.drive)
            add(ibd, A, n - 1, -1j * p.drive * ns)
            add(ibd, B, n, -p.beta)
            add(ibd, BD, n + 1, -p.beta * ns)
            add(ibd, BD, n - 1, p.beta * ns)
            N[ibd, self.input_force(2 * n - 1)] = -1j
        return M, N

    def transfer(self, omega):
        """Matrix mapping the input vector to the unknowns at base frequency omega."""
        M, N = self.matrices(omega)
        try:
            T = np.linalg.solve(M, N)
        except np.linalg.LinAlgError as exc:
            raise ThresholdError(f"singular system at omega={omega:g}") from exc
        if not np.all(np.isfinite(T)) or np.linalg.cond(M) > 1e15:
            raise ThresholdError(f"system at threshold (omega={omega:g})")
        return T

    def quadrature_rows(self, omega, which="output"):
        """Rows expressing X_+ and X_- of the central component in terms of the inputs.

        ``which`` is "output" (a_out = sqrt(kappa) a - a_in) or "motion" (b).
        """
        T = self.transfer(omega)
        if which == "motion":
            lo, hi = T[self.unknown(B, 0)], T[self.unknown(BD, 0)]
        elif which == "output":
            rk = math.sqrt(self.params.kappa)
            lo = rk * T[self.unknown(A, 0)]
            hi = rk * T[self.unknown(AD, 0)]
            lo[self.input_a(0)] -= 1.0
            hi[self.input_a(0, True)] -= 1.0
        else:
            raise ValueError(f"unknown quadrature source {which!r}")
        return lo + hi, (lo - hi) / 1j


def build_system(params: SidebandParams, n_max=1, secular=False):
    return SidebandSystem(params, n_max, secular)


# --- input noise models ----------------------------------------------------

@dataclass(frozen=True)
class InputModel:
    """Input light statistics: ``"vacuum"`` or ``"nopa"`` with squeeze parameter R."""

    kind: str = "vacuum"
    squeeze: float = 0.0

    def __post_init__(self):
        if self.kind not in ("vacuum", "nopa"):
            raise ValueError(f"unknown input model {self.kind!r}")


def input_covariance(system: SidebandSystem):
    """Symmetrised covariance of one system's inputs (vacuum light, recoil force)."""
    n_light = 2 * len(system.sidebands)
    cov = np.zeros((system.n_inputs, system.n_inputs))
    cov[:n_light, :n_light] = 0.5 * np.eye(n_light)
    p = system.params
    for k in range(n_light, system.n_inputs):
        cov[k, k] = p.phi * p.omega_m
    return cov


def nopa_covariance(sys_a: SidebandSystem, sys_b: SidebandSystem, squeeze):
    """Joint input covariance when the two cavities are fed by a broadband NOPA.

    The light satisfies <(X+_A + X+_B)^2>/2 = <(X-_A - X-_B)^2>/2 = exp(-2R).
    """
    if sys_a.n_max != sys_b.n_max:
        raise ValueError("both systems need the same truncation")
    na = sys_a.n_inputs
    cov = np.zeros((2 * na, 2 * na))
    cov[:na, :na] = input_covariance(sys_a)
    cov[na:, na:] = input_covariance(sys_b)
    n_light = 2 * len(sys_a.sidebands)
    cov[:n_light, :n_light] *= math.cosh(2 * squeeze)
    cov[na:na + n_light, na:na + n_light] *= math.cosh(2 * squeeze)
    m = -0.5 * math.sinh(2 * squeeze)
    for n in sys_a.sidebands:
        ia, iad = sys_a.input_a(n), sys_a.input_a(n, True)
        cov[ia, na + iad] = cov[na + iad, ia] = m
        cov[iad, na + ia] = cov[na + ia, iad] = m
    return cov


def _form(row, cov):
    return float(np.real(row @ cov @ row.conj()))


# --- spectra ----------------------------------------------------------------

@dataclass
class SpectralResult:
    omega: np.ndarray
    s_plus: np.ndarray
    s_minus: np.ndarray
    n_max: int
    bandwidth: float
    secular: bool
    source: str = "output"

    def write_csv(self, path, meta=None):
        meta = dict(meta or {}, n_max=self.n_max, secular=self.secular, source=self.source)
        return write_table(path, ["omega_rad_s", "S_Xplus", "S_Xminus"],
                           zip(self.omega, self.s_plus, self.s_minus), meta)


def spectrum(system: SidebandSystem, omegas, which="output"):
    """Symmetrised X_+ and X_- spectra with vacuum light and recoil noise."""
    omegas = np.atleast_1d(np.asarray(omegas, float))
    cov = input_covariance(system)
    sp, sm = np.empty(omegas.size), np.empty(omegas.size)
    for i, w in enumerate(omegas):
        xp, xm = system.quadrature_rows(w, which)
        sp[i], sm[i] = _form(xp, cov), _form(xm, cov)
    bw = float(np.max(np.abs(omegas))) if omegas.size else 0.0
    return SpectralResult(omegas, sp, sm, system.n_max, bw, system.secular, which)


@dataclass(frozen=True)
class IntegratedVariance:
    value: float
    abserr: float
    converged: bool


def _integrate(fun, bandwidth, scale, epsrel=1e-6):
    # break points resolve the narrow features of width ~ kappa or less
    pts = sorted({0.0, *(s * f * scale for s in (-1, 1) for f in (0.01, 0.1, 1.0, 10.0)
                         if f * scale < bandwidth)})
    val, err = quad(fun, -bandwidth, bandwidth, points=pts, epsabs=0.0, epsrel=epsrel, limit=1000)
    val /= 2.0 * math.pi
    err /= 2.0 * math.pi
    return IntegratedVariance(val, err, err <= 10 * epsrel * abs(val) + 1e-14)


def motion_variance(system: SidebandSystem, bandwidth=None, epsrel=1e-6):
    """Time-domain variances (<X+^2>, <X-^2>) of the mechanical quadratures."""
    p = system.params
    bw = p.omega_m if bandwidth is None else bandwidth
    cov = input_covariance(system)
    scale = min(p.kappa, max(p.gamma * abs(1 - 2 * p.beta / p.gamma) if p.gamma else p.kappa, 1e-6 * p.kappa))
    plus = _integrate(lambda w: _form(system.quadrature_rows(w, "motion")[0], cov), bw, scale, epsrel)
    minus = _integrate(lambda w: _form(system.quadrature_rows(w, "motion")[1], cov), bw, scale, epsrel)
    return plus, minus


# --- entanglement transfer ---------------------------------------------------

def nopa_epr_factor(beta, kappa_c):
    """Squeeze factor exp(-R) = (kappa_c - beta)/(kappa_c + beta) of a NOPA below threshold."""
    if beta < 0:
        raise ValueError("beta must be non-negative")
    if beta >= kappa_c:
        raise ValueError("NOPA at or above threshold (beta >= kappa_c)")
    return (kappa_c - beta) / (kappa_c + beta)


def epr_variance_analytic(squeeze, kappa_over_wm, phi):
    r2 = 2.0 * squeeze
    stokes = 3.0 * math.exp(r2) + 2.0 * math.sinh(r2)
    return math.exp(-r2) + kappa_over_wm**2 / 16.0 * stokes + 4.0 * phi / kappa_over_wm


def epr_optimum(squeeze, phi):
    """Closed-form (Delta_EPR,min, kappa/omega_m at the minimum)."""
    r2 = 2.0 * squeeze
    stokes = 3.0 * math.exp(r2) + 2.0 * math.sinh(r2)
    dmin = math.exp(-r2) + 3.0 * (phi / 2.0) ** (2.0 / 3.0) * stokes ** (1.0 / 3.0)
    return dmin, (32.0 * phi / stokes) ** (1.0 / 3.0)


def epr_variance_numeric(sys_a: SidebandSystem, sys_b: SidebandSystem, squeeze, bandwidth=None,
                         quadrature="+", epsrel=1e-6):
    """Joint motional variance <(X+_A - X+_B)^2>/2 (or <(X-_A + X-_B)^2>/2).

    The NOPA-correlated light drives both systems; the symmetrised joint
    spectrum is integrated over |w| <= bandwidth (default omega_m).
    """
    if quadrature not in ("+", "-"):
        raise ValueError("quadrature must be '+' or '-'")
    cov = nopa_covariance(sys_a, sys_b, squeeze)
    sign = -1.0 if quadrature == "+" else 1.0
    pick = 0 if quadrature == "+" else 1

    def s(w):
        ra = sys_a.quadrature_rows(w, "motion")[pick]
        rb = sys_b.quadrature_rows(w, "motion")[pick]
        return _form(np.concatenate([ra, sign * rb]), cov) / 2.0

    bw = min(sys_a.params.omega_m, sys_b.params.omega_m) if bandwidth is None else bandwidth
    return _integrate(s, bw, min(sys_a.params.kappa, sys_b.params.kappa), epsrel)


# --- squeezed light ----------------------------------------------------------

def squeezing_variance_analytic(kappa_over_wm, phi, delta_t=0.0):
    x = kappa_over_wm
    return (5.0 / 16.0 * x**2 + 3.0 / 32.0 * x**2 * delta_t + 2.0 * phi / x * (1.0 + delta_t)
            + delta_t**2 / 4.0)


def squeezing_optimum(phi):
    """(kappa/omega_m, minimal output variance) on threshold for an ideal cavity."""
    return 2.0 * (2.0 * phi / 5.0) ** (1.0 / 3.0), 1.5 * (5.0 * phi**2 / 2.0) ** (1.0 / 3.0)


def squeeze_output_variance(kappa_over_wm, phi, delta_t=0.0, n_max=1, omega=0.0):
    """Output X_+ variance at omega (units of omega_m): (numeric, analytic).

    Uses Gamma = kappa and beta = (Gamma/2)(1 - delta_t); the numeric solve
    floors delta_t at 1e-9 while the analytic value is exact at threshold.
    """
    if delta_t < 0:
        raise ValueError("delta_t must be non-negative")
    system = SidebandSystem(transfer_params(kappa_over_wm, phi, 1.0, delta_t), n_max)
    xp, _ = system.quadrature_rows(omega, "output")
    return _form(xp, input_covariance(system)), squeezing_variance_analytic(kappa_over_wm, phi, delta_t)


def lossy_squeezing(ideal, loss_kappa, kappa):
    """Mix ideal squeezed output with vacuum through the loss port."""
    if not 0 <= loss_kappa < kappa:
        raise ValueError("need 0 <= kappa' < kappa")
    t = loss_kappa / kappa
    return (1.0 - t) * ideal + t


def lossy_squeezing_optimum(phi, loss_over_wm):
    """Optimum with loss folded into an effective recoil parameter phi + kappa'/(2 omega_m)."""
    return squeezing_optimum(phi + loss_over_wm / 2.0)


@dataclass(frozen=True)
class SqueezingDesign:
    kappa: float
    finesse: float
    loss_kappa: float
    drive: float
    zeta: float
    phi: float
    variance: float

    @property
    def squeezing_db(self):
        return -to_db(self.variance)


def squeezing_design(sphere: Sphere, length, waist, wavelength, omega_m, round_trip_loss=0.0):
    """Pick kappa for the best lossy squeezing and the cooling-beam ratio zeta giving Gamma = kappa."""
    phi = recoil_parameter(sphere, wavelength)
    kl = round_trip_loss_linewidth(round_trip_loss, length)
    x, _ = lossy_squeezing_optimum(phi, kl / omega_m)
    kappa = x * omega_m
    cav = CavitySetup(length, waist, wavelength, linewidth=kappa, loss_linewidth=min(kl, kappa))
    g = optomech_coupling(sphere, cav)
    amp = 2.0 * g * cav.k * zero_point_length(sphere.mass, omega_m) * math.sqrt(
        trap_photon_number(sphere, cav, omega_m))
    drive = kappa / 2.0
    zeta = (drive / amp) ** 2 / 2.0
    ideal = squeezing_variance_analytic(x, phi)
    return SqueezingDesign(kappa, cav.finesse, kl, drive, zeta, phi, lossy_squeezing(ideal, kl, kappa))


def threshold_offset_for_penalty(kappa_over_wm, phi, penalty_db=1.0):
    """delta_t at which the analytic output variance exceeds its threshold value by penalty_db."""
    x = kappa_over_wm
    base = squeezing_variance_analytic(x, phi, 0.0)
    target = base * 10.0 ** (penalty_db / 10.0)
    b = 3.0 / 32.0 * x**2 + 2.0 * phi / x
    c = base - target
    return 2.0 * (-b + math.sqrt(b * b - c))


@dataclass(frozen=True)
class LambDicke:
    eta: float
    delta_t: float
    kappa_over_wm: float
    variance: float
    zero_point: float


def lamb_dicke_check(sphere: Sphere, omega_m, wavelength=1e-6, penalty_db=1.0, n_max=1, kappa_over_wm=None):
    """Lamb-Dicke parameter k Delta x of the unsqueezed motional quadrature.

    The cavity sits at the ideal squeezing optimum and the parametric drive
    is backed off from threshold until the output squeezing is 1 dB worse.
    """
    phi = recoil_parameter(sphere, wavelength)
    x = squeezing_optimum(phi)[0] if kappa_over_wm is None else kappa_over_wm
    dt = threshold_offset_for_penalty(x, phi, penalty_db)
    system = SidebandSystem(transfer_params(x, phi, 1.0, dt), n_max)
    plus, minus = motion_variance(system)
    var = max(plus.value, minus.value)
    xm = zero_point_length(sphere.mass, omega_m)
    k = 2.0 * math.pi / wavelength
    return LambDicke(k * xm * math.sqrt(var), dt, x, var, xm)


def minimize_ratio(fun, lo=1e-4, hi=10.0):
    """Bounded 1-D minimisation in log space; returns (argmin, min)."""
    res = minimize_scalar(lambda t: fun(math.exp(t)), bounds=(math.log(lo), math.log(hi)),
                          method="bounded", options={"xatol": 1e-12, "maxiter": 1000})
    return math.exp(res.x), float(res.fun)
