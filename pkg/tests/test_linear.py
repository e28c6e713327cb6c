import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from circeiv.exceptions import ConfigurationError, IllPosedWeightError
from circeiv.experiments import lc_model, simulate_dataset
from circeiv.linear import (
    LinearDataset,
    SincKernel,
    bandwidth_grid,
    deconv_weight,
    double_smooth_estimate,
    estimate_m_linear,
    gl_select_bandwidth,
    h_opt_ss,
    projection_estimate_linear,
    simulation_grid,
    v0_linear,
)
from circeiv.noise import Gaussian, Laplace, LinearCustom, LinearNoNoise, Smoothness
from circeiv.samplers import make_rng
from circeiv.selection import EstimatorConfig


def quad_weight(u, h, noise):
    """(1/2pi) int_{-T}^{T} cos(t u) / f(t) dt by adaptive oscillatory quadrature."""
    T = 1.0 / h
    g = lambda t: 1.0 / complex(noise.cf(t)).real
    if u == 0:
        val = integrate.quad(g, 0, T, epsabs=0, epsrel=1e-13, limit=400)[0]
    else:
        val = integrate.quad(g, 0, T, weight="cos", wvar=u, epsabs=0, epsrel=1e-13, limit=400)[0]
    return val / math.pi


class TestWeight:
    def test_nonoise_closed_form(self):
        h = 0.25
        for u in (-1.3, 0.2, 3.0):
            assert deconv_weight(u, h, LinearNoNoise()) == pytest.approx(math.sin(u / h) / (math.pi * u), rel=1e-13)
        assert deconv_weight(0.0, h, LinearNoNoise()) == pytest.approx(1 / (math.pi * h), rel=1e-15)

    def test_nonoise_equals_kernel(self):
        h, u = 0.3, np.linspace(-2, 2, 9)
        np.testing.assert_allclose(deconv_weight(u, h, LinearNoNoise()), SincKernel()(u / h) / h, rtol=1e-12, atol=1e-14)

    @pytest.mark.parametrize("sigma", [0.075, 0.1, 0.5])
    @pytest.mark.parametrize("h", [1.0, 0.5, 1 / 3, 0.05])
    @pytest.mark.parametrize("u", [0.0, 1e-7, 1e-3, 0.37, -2.2, 9.0])
    def test_laplace_vs_quadrature(self, sigma, h, u):
        noise = Laplace(sigma)
        ref = quad_weight(u, h, noise)
        assert deconv_weight(u, h, noise) == pytest.approx(ref, rel=1e-10, abs=1e-10 * (1 / h))

    def test_laplace_hand_formula(self):
        s, h, u = 0.1, 0.2, 0.8
        T = 1 / h
        ref = (math.sin(u * T) / u + s * s * (T * T * math.sin(u * T) / u + 2 * T * math.cos(u * T) / u**2
                                            - 2 * math.sin(u * T) / u**3)) / math.pi
        assert deconv_weight(u, h, Laplace(s)) == pytest.approx(ref, rel=1e-12)

    def test_series_switch_continuous(self):
        noise = Laplace(0.3)
        h = 0.5
        cut = 0.5 * h
        below = deconv_weight(cut * (1 - 1e-12), h, noise)
        above = deconv_weight(cut * (1 + 1e-12), h, noise)
        assert below == pytest.approx(above, rel=1e-11)

    def test_gaussian_quadrature_path(self):
        noise = Gaussian(0.2)
        for u in (0.0, 0.4, -3.0):
            assert deconv_weight(u, 0.25, noise) == pytest.approx(quad_weight(u, 0.25, noise), rel=1e-10, abs=1e-12)

    @given(st.floats(-20, 20), st.sampled_from([1.0, 0.5, 0.2, 0.05]))
    def test_even(self, u, h):
        assert deconv_weight(u, h, Laplace(0.1)) == deconv_weight(-u, h, Laplace(0.1))

    def test_ill_posed(self):
        noise = LinearCustom(lambda t: np.maximum(1 - np.abs(t) / 3, 0.0) + 0j, Smoothness("os", degree=2.0))
        deconv_weight(0.5, 1.0, noise)
        with pytest.raises(IllPosedWeightError):
            deconv_weight(0.5, 0.25, noise)

    def test_non_hermitian(self):
        noise = LinearCustom(lambda t: (1 + 0.3j * t * t) / (1 + t * t) ** 2)
        with pytest.raises(ValueError, match="not real"):
            deconv_weight(0.5, 0.5, noise)


def estimate_oracle(theta, z, h, noise, x):
    return sum(math.sin(t) * quad_weight(zz - x, h, noise) for t, zz in zip(theta, z)) / len(z)


class TestEstimate:
    def test_single_point(self):
        h = 0.25
        d = LinearDataset([math.pi / 2], [0.3])
        assert projection_estimate_linear(d, d.sin_theta, h, LinearNoNoise(), 0.3) == pytest.approx(1 / (math.pi * h))

    def test_zero_weights(self):
        d = LinearDataset(np.zeros(4), [0.1, 0.5, 0.2, 0.9])
        assert projection_estimate_linear(d, d.sin_theta, 0.5, Laplace(0.1), 0.2) == 0.0

    def test_quadrature_instance(self):
        rng = np.random.default_rng(0)
        d = LinearDataset(rng.uniform(-3, 3, 5), rng.uniform(0, 1, 5))
        noise = Laplace(0.1)
        ref = estimate_oracle(d.theta, d.z, 1 / 3, noise, 0.4)
        assert projection_estimate_linear(d, d.sin_theta, 1 / 3, noise, 0.4) == pytest.approx(ref, abs=1e-8)

    def test_bad_bandwidth(self):
        d = LinearDataset([0.1], [0.2])
        with pytest.raises(ValueError):
            projection_estimate_linear(d, d.sin_theta, 1.5, Laplace(0.1), 0.2)

    def test_outside_unit_interval_warns(self):
        d = LinearDataset([0.1], [0.2])
        with pytest.warns(UserWarning):
            projection_estimate_linear(d, d.sin_theta, 0.5, Laplace(0.1), 1.5)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            projection_estimate_linear(d, d.sin_theta, 0.5, Laplace(0.1), 0.5)


class TestDoubleSmooth:
    def test_idempotent_and_symmetric(self, rng):
        d = LinearDataset(rng.uniform(-3, 3, 20), rng.uniform(0, 1, 20))
        noise = Laplace(0.1)
        a = projection_estimate_linear(d, d.cos_theta, 0.5, noise, 0.3)
        assert double_smooth_estimate(d, d.cos_theta, 0.5, 0.5, noise, 0.3) == a
        assert double_smooth_estimate(d, d.cos_theta, 0.5, 0.2, noise, 0.3) == a
        assert double_smooth_estimate(d, d.cos_theta, 0.2, 0.5, noise, 0.3) == a

    def test_numeric_convolution(self):
        rng = np.random.default_rng(5)
        d = LinearDataset(rng.uniform(-3, 3, 5), rng.uniform(0, 1, 5))
        noise = Laplace(0.1)
        h, hp, x = 0.5, 0.2, 0.4
        # (K_h' * p_h)(x) = int K_h'(x - y) p_h(y) dy, composite Gauss-Legendre over a long window
        R, panels = 3000.0, 6000
        nodes, weights = np.polynomial.legendre.leggauss(16)
        edges = np.linspace(x - R, x + R, panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        y = (mid[:, None] + half[:, None] * nodes).ravel()
        wq = (half[:, None] * weights).ravel()
        p_h = np.zeros_like(y)
        for t, z in zip(d.theta, d.z):
            p_h += math.sin(t) * deconv_weight(z - y, h, noise)
        p_h /= d.n
        kern = SincKernel()((x - y) / hp) / hp
        conv = float(np.sum(wq * kern * p_h))
        direct = double_smooth_estimate(d, d.sin_theta, h, hp, noise, x)
        assert conv == pytest.approx(direct, abs=1e-4)


class TestV0AndGrid:
    def test_laplace_norms_vs_quadrature(self):
        s, h, n = 0.1, 0.2, 200
        T = 1 / h
        l1 = integrate.quad(lambda t: 1 + s * s * t * t, -T, T, epsrel=1e-14)[0]
        l2 = integrate.quad(lambda t: (1 + s * s * t * t) ** 2, -T, T, epsrel=1e-14)[0]
        ref = min(l2 * math.pi / s, l1 * l1) / ((2 * math.pi) ** 2 * n)
        assert v0_linear(n, h, Laplace(s)) == pytest.approx(ref, rel=1e-10)

    def test_nonoise_branch(self):
        h, n = 0.25, 50
        assert v0_linear(n, h, LinearNoNoise()) == pytest.approx((2 / h) ** 2 / ((2 * math.pi) ** 2 * n), rel=1e-14)

    def test_monotone_in_h(self):
        hs = 1 / np.arange(1, 80)
        for noise in (Laplace(0.1), Gaussian(0.05), LinearNoNoise()):
            v = v0_linear(200, hs, noise)
            assert np.all(np.diff(v) >= 0)  # hs decreasing

    def test_laplace_grid_brute_force(self):
        s, n = 0.1, 200
        expected = []
        for k in range(1, n + 1):
            T = float(k)
            l1 = 2 * T + 2 / 3 * s * s * T**3
            l2 = 2 * T + 4 / 3 * s * s * T**3 + 0.4 * s**4 * T**5
            if l2 / l1**2 >= math.log(n) / n:
                expected.append(1 / k)
        np.testing.assert_allclose(bandwidth_grid(n, Laplace(s)), expected, rtol=1e-15)

    def test_nonoise_grid_n100(self):
        grid = bandwidth_grid(100, LinearNoNoise())
        k = np.rint(1 / grid).astype(int)
        assert list(k) == list(range(1, 11))  # h/2 >= log(100)/100 iff k <= 10

    def test_grid_shape(self):
        g = bandwidth_grid(200, Laplace(0.075))
        assert np.all(np.diff(g) < 0)
        assert np.allclose(1 / g, np.rint(1 / g)) and np.all(1 / g <= 200)

    def test_simulation_grid(self):
        g = simulation_grid(200)
        assert len(g) == int(200 / math.log(200)) and g[0] == 1.0

    def test_small_n(self):
        with pytest.raises(ConfigurationError):
            bandwidth_grid(2, Laplace(0.1))


class TestSelection:
    def test_singleton(self, rng):
        d = LinearDataset(rng.uniform(-3, 3, 10), rng.uniform(0, 1, 10))
        h, diag = gl_select_bandwidth(d, d.sin_theta, Laplace(0.1), 0.5, 0.4, grid=[0.5])
        assert h == 0.5 and diag.A[0] == 0

    def test_tie_goes_to_largest_h(self):
        d = LinearDataset(np.zeros(5), np.linspace(0, 1, 5))
        # all-zero sine weights: every estimate and A vanish, sqrt(V) decides
        h, _ = gl_select_bandwidth(d, d.sin_theta, Laplace(0.1), 0.5, 0.4, grid=[0.2, 1.0, 0.5])
        assert h == 1.0

    def test_determinism_fixture(self):
        model = lc_model(0.075)
        out = []
        for _ in range(2):
            d = simulate_dataset(model, 200, make_rng(1, 0))
            out.append(estimate_m_linear(d, model.noise, 0.2, EstimatorConfig(c0=0.4)))
        assert out[0][0] == out[1][0] and out[0][1].selected == out[1][1].selected

    def test_admissible_and_nonnegative(self):
        model = lc_model(0.1)
        grid = set(np.round(1 / bandwidth_grid(200, model.noise)).astype(int))
        for seed in range(5):
            d = simulate_dataset(model, 200, make_rng(seed))
            _, diag = estimate_m_linear(d, model.noise, 0.2)
            for comp in (diag.sine, diag.cosine):
                assert round(1 / comp.selected) in grid
                assert np.all(comp.A >= 0)

    def test_monotone_in_c0(self):
        model = lc_model(0.075)
        violations = 0
        for seed in range(20):
            d = simulate_dataset(model, 200, make_rng(seed, 99))
            small, _ = gl_select_bandwidth(d, d.cos_theta, model.noise, 0.2, 0.4)
            large, _ = gl_select_bandwidth(d, d.cos_theta, model.noise, 0.2, 4.0)
            violations += large < small
        assert violations == 0

    def test_permutation_invariance(self):
        model = lc_model(0.1)
        d = simulate_dataset(model, 200, make_rng(4))
        perm = np.random.default_rng(0).permutation(200)
        assert estimate_m_linear(d, model.noise, 0.2)[1].selected == \
            estimate_m_linear(d.permuted(perm), model.noise, 0.2)[1].selected


class TestSupersmooth:
    def test_h_opt(self):
        assert h_opt_ss(math.exp(2), 1.0, 2.0) == pytest.approx(1.0)
        assert h_opt_ss(200, 0.005, 2.0) == pytest.approx(0.04344, abs=5e-6)
        assert h_opt_ss(2000, 0.005, 2.0) < h_opt_ss(200, 0.005, 2.0)
        assert h_opt_ss(3, 10.0, 1.0) == 1.0

    def test_gaussian_mode(self, rng):
        noise = Gaussian(0.1)
        d = LinearDataset(rng.vonmises(0.5, 4.0, 100), rng.uniform(0, 1, 100) + rng.normal(0, 0.1, 100))
        m, diag = estimate_m_linear(d, noise, 0.5)
        h = h_opt_ss(100, 0.005, 2.0)
        assert diag.mode == "ss" and diag.selected == (h, h)
        assert abs(m - 0.5) < 1.0


def test_constant_response(rng):
    d = LinearDataset(np.full(60, math.pi / 2), rng.uniform(0, 1, 60))
    for x in (0.1, 0.5, 0.9):
        m, _ = estimate_m_linear(d, LinearNoNoise(), x)
        assert m == pytest.approx(math.pi / 2, abs=1e-12)
