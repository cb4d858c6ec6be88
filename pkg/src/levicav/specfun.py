"""Spherical Bessel and Riccati-Bessel functions for the multipole solver.

j_n uses Miller's downward recurrence normalised to the closed-form j_0 or
j_1 (whichever is larger in magnitude), which stays accurate for n > |x|.
y_n uses the upward recurrence, stable in that direction.
"""

from __future__ import annotations

import math

import numpy as np

_BIG = 1e250


def _start_order(n_max, x_abs):
    return int(n_max + 16 + 1.5 * x_abs + math.sqrt(40.0 * (n_max + 1)))


def spherical_jn_all(n_max, x):
    """j_0(x) .. j_n_max(x) for real or complex x; returns shape (n_max+1, *x.shape)."""
    x = np.asarray(x)
    dtype = complex if np.iscomplexobj(x) else float
    x = x.astype(dtype)
    out = np.zeros((n_max + 1,) + x.shape, dtype)
    zero = x == 0
    xs = np.where(zero, 1.0, x)
    start = _start_order(n_max, float(np.max(np.abs(xs))) if xs.size else 0.0)
    jp1 = np.zeros_like(xs)
    j = np.full_like(xs, 1e-300)
    for n in range(start, 0, -1):
        jm1 = (2 * n + 1) / xs * j - jp1
        jp1, j = j, jm1
        big = np.abs(j) > _BIG
        if np.any(big):
            j = np.where(big, j / _BIG, j)
            jp1 = np.where(big, jp1 / _BIG, jp1)
            out[:, big] /= _BIG
        if n - 1 <= n_max:
            out[n - 1] = j
    # out holds unnormalised j_0 .. j_n_max
    j0 = np.sin(xs) / xs
    j1 = np.sin(xs) / xs**2 - np.cos(xs) / xs
    use0 = np.abs(j0) >= np.abs(j1)
    if n_max >= 1:
        scale = np.where(use0, j0 / out[0], j1 / out[1])
    else:
        scale = j0 / out[0]
    out *= scale
    if np.any(zero):
        out[:, zero] = 0.0
        out[0, zero] = 1.0
    return out


def spherical_yn_all(n_max, x):
    """y_0 .. y_n_max by upward recurrence (x != 0)."""
    x = np.asarray(x)
    x = x.astype(complex if np.iscomplexobj(x) else float)
    out = np.empty((n_max + 1,) + x.shape, x.dtype)
    out[0] = -np.cos(x) / x
    if n_max >= 1:
        out[1] = -np.cos(x) / x**2 - np.sin(x) / x
    for n in range(1, n_max):
        out[n + 1] = (2 * n + 1) / x * out[n] - out[n - 1]
    return out


def spherical_h1_all(n_max, x):
    return spherical_jn_all(n_max, x) + 1j * spherical_yn_all(n_max, x)


def spherical_jn_series(n, x, terms=40):
    """Power series j_n(x) = x^n sum_k (-x^2/2)^k / (k! (2n+2k+1)!!); reference for small |x|."""
    x = complex(x) if isinstance(x, complex) else float(x)
    dfact = 1.0
    for m in range(1, 2 * n + 2, 2):
        dfact *= m
    term = 1.0 / dfact
    total = term
    for k in range(1, terms):
        term *= -x * x / 2.0 / (k * (2 * n + 2 * k + 1))
        total += term
    return x**n * total


def riccati_psi(n_max, x):
    """psi_n(x) = x j_n(x) and its derivative, orders 0..n_max."""
    j = spherical_jn_all(n_max, x)
    return _riccati(j, x)


def riccati_xi(n_max, x):
    """xi_n(x) = x h_n^(1)(x) and its derivative, orders 0..n_max."""
    h = spherical_h1_all(n_max, x)
    return _riccati(h, x)


def _riccati(z, x):
    x = np.asarray(x)
    return x * z, x * derivative_ratio(z, x)


def derivative_ratio(z, x):
    """(x z_n)'/x = z_{n-1} - n z_n / x, with the n = 0 entry from z_0' = -z_1."""
    x = np.asarray(x)
    out = np.empty_like(z)
    out[0] = z[0] / x - z[1] if z.shape[0] > 1 else np.nan
    n = np.arange(1, z.shape[0]).reshape((-1,) + (1,) * x.ndim)
    out[1:] = z[:-1] - n * z[1:] / x
    return out


def angular_functions(n_max, mu):
    """pi_n and tau_n (n = 1..n_max) at mu = cos(theta); rows index n-1."""
    mu = np.asarray(mu, float)
    pi = np.zeros((n_max + 1,) + mu.shape)
    tau = np.zeros_like(pi)
    if n_max >= 1:
        pi[1] = 1.0
        tau[1] = mu
    for n in range(2, n_max + 1):
        pi[n] = (2 * n - 1) / (n - 1) * mu * pi[n - 1] - n / (n - 1) * pi[n - 2]
        tau[n] = n * mu * pi[n] - (n + 1) * pi[n - 1]
    return pi[1:], tau[1:]
