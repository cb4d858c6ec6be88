import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from levicav import specfun


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-3, 60.0), st.integers(1, 40))
def test_jn_matches_reference(x, n_max):
    ours = specfun.spherical_jn_all(n_max, np.array([x]))[:, 0]
    ref = special.spherical_jn(np.arange(n_max + 1), x)
    # absolute scale guards the zeros of j_n
    assert np.allclose(ours, ref, rtol=1e-12, atol=1e-14 * np.max(np.abs(ref)))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 60.0), st.integers(1, 30))
def test_yn_matches_reference(x, n_max):
    ours = specfun.spherical_yn_all(n_max, np.array([x]))[:, 0]
    ref = special.spherical_yn(np.arange(n_max + 1), x)
    assert np.allclose(ours, ref, rtol=1e-11, atol=0)


def test_jn_complex_argument():
    z = np.array([1.5 + 0.2j, 4.0 + 1e-3j])
    ours = specfun.spherical_jn_all(10, z)
    ref = np.array([special.spherical_jn(n, z) for n in range(11)])
    assert np.allclose(ours, ref, rtol=1e-12, atol=1e-300)


def test_small_argument_series():
    for n in (0, 1, 5):
        assert specfun.spherical_jn_series(n, 1e-3) == pytest.approx(special.spherical_jn(n, 1e-3), rel=1e-14)
    assert specfun.spherical_jn_all(5, np.array([0.0]))[:, 0] == pytest.approx([1, 0, 0, 0, 0, 0])


def test_j0_at_pi_is_zero():
    assert specfun.spherical_jn_all(3, np.array([np.pi]))[0, 0] == pytest.approx(0.0, abs=1e-15)


def test_wronskian():
    x = np.linspace(0.3, 30, 50)
    j = specfun.spherical_jn_all(20, x)
    y = specfun.spherical_yn_all(20, x)
    # j_{n+1} y_n - j_n y_{n+1} = 1/x^2
    assert np.allclose((j[1:] * y[:-1] - j[:-1] * y[1:]) * x**2, 1.0, rtol=1e-10)


def test_riccati_derivatives():
    x, h = 2.7, 1e-6
    psi, dpsi = specfun.riccati_psi(8, np.array(x))
    p1, _ = specfun.riccati_psi(8, np.array(x + h))
    p0, _ = specfun.riccati_psi(8, np.array(x - h))
    assert np.allclose(dpsi, (p1 - p0) / (2 * h), rtol=1e-7, atol=1e-12)
    xi, dxi = specfun.riccati_xi(8, np.array(x))
    assert np.allclose(xi.real, psi)
    assert np.allclose(xi.imag, x * special.spherical_yn(np.arange(9), x))


def test_angular_functions():
    mu = np.array([-0.9, -0.1, 0.4, 1.0])
    pi_n, tau_n = specfun.angular_functions(6, mu)
    assert np.allclose(pi_n[0], 1.0) and np.allclose(pi_n[1], 3 * mu)
    assert np.allclose(tau_n[0], mu)
    # pi_n(1) = tau_n(1) = n(n+1)/2
    n = np.arange(1, 7)
    assert np.allclose(pi_n[:, -1], n * (n + 1) / 2)
    assert np.allclose(tau_n[:, -1], n * (n + 1) / 2)
    lpmv = np.array([special.lpmv(1, k, mu) for k in n])
    # scipy includes the Condon-Shortley phase
    assert np.allclose(pi_n * np.sqrt(1 - mu**2), -lpmv, atol=1e-12)
