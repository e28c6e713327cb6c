import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from circeiv.noise import (
    CircularCustom,
    CircularNoNoise,
    Gaussian,
    Laplace,
    LinearCustom,
    LinearNoNoise,
    Smoothness,
    WrappedLaplace,
    cf_circular,
    cf_linear,
    ell1_norm_circular,
    is_circular_model,
    l1_norm_linear,
    parse_noise,
)


def wrapped_laplace_density(theta, lam, terms=30):
    k = np.arange(-terms, terms + 1)
    return float(np.sum(0.5 * lam * np.exp(-lam * np.abs(theta + 2 * np.pi * k))))


def partial_sum_ell1(lam, N=10**6):
    l = np.arange(1, N + 1, dtype=float)
    head = 1.0 + 2.0 * math.fsum(lam * lam / (l * l + lam * lam))
    # Euler-Maclaurin remainder of sum_{l>N} lam^2/l^2, two-sided
    tail = 2.0 * lam * lam / (N + 0.5)
    return head + tail


class TestCircularCf:
    def test_zero_frequency(self):
        assert cf_circular(WrappedLaplace(2.54), 0) == 1.0

    def test_first_frequency(self):
        assert cf_circular(WrappedLaplace(2.54), 1).real == pytest.approx(6.4516 / 7.4516, rel=1e-12)

    def test_conjugate_symmetry(self):
        m = WrappedLaplace(1.74)
        for l in range(1, 6):
            assert cf_circular(m, -l) == np.conj(cf_circular(m, l))

    @pytest.mark.parametrize("lam,l", [(2.54, 1), (1.74, 2), (0.7, 3)])
    def test_against_density(self, lam, l):
        re = integrate.quad(lambda t: math.cos(l * t) * wrapped_laplace_density(t, lam), -math.pi, math.pi,
                            epsabs=1e-13, points=[0.0])[0]
        im = integrate.quad(lambda t: math.sin(l * t) * wrapped_laplace_density(t, lam), -math.pi, math.pi,
                            epsabs=1e-13, points=[0.0])[0]
        got = cf_circular(WrappedLaplace(lam), l)
        assert got.real == pytest.approx(re, abs=1e-10)
        assert abs(im) < 1e-12

    @given(st.floats(0.1, 50), st.integers(0, 1000))
    def test_real_even_positive_decreasing(self, lam, l):
        m = WrappedLaplace(lam)
        v = cf_circular(m, l)
        assert v.imag == 0.0
        assert 0 < v.real <= 1.0
        assert v == cf_circular(m, -l)
        assert cf_circular(m, l + 1).real < v.real

    def test_ordinary_smooth_bounds(self):
        lam = 2.54
        l = np.arange(1, 10_000)
        f = WrappedLaplace(lam).cf(l).real
        # lam^2/(1+lam^2) (1+|l|)^-2 <= f <= lam^2 (1+|l|)^-2 * 4 for |l| >= 1
        lower = lam**2 / (1 + lam**2) / (1 + l) ** 2
        upper = 4 * lam**2 / (1 + l) ** 2
        assert np.all(lower <= f) and np.all(f <= upper)
        assert WrappedLaplace(lam).smoothness.degree == 2.0

    def test_nonpositive_scale_rejected(self):
        with pytest.raises(ValueError):
            WrappedLaplace(0.0)
        with pytest.raises(ValueError):
            WrappedLaplace(-1.0)


class TestLinearCf:
    def test_origin(self):
        assert cf_linear(Laplace(0.075), 0.0) == 1.0

    def test_laplace_hand_value(self):
        assert cf_linear(Laplace(0.1), 10.0).real == pytest.approx(0.5, rel=1e-14)

    def test_gaussian_hand_value(self):
        assert cf_linear(Gaussian(0.1), 10.0).real == pytest.approx(math.exp(-0.5), rel=1e-14)

    def test_laplace_against_density(self):
        s, t = 0.3, 2.7
        val = integrate.quad(lambda e: math.cos(t * e) * math.exp(-abs(e) / s) / (2 * s), -np.inf, np.inf,
                             epsabs=1e-13)[0]
        assert cf_linear(Laplace(s), t).real == pytest.approx(val, abs=1e-10)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            cf_linear(Laplace(0.1), math.inf)

    @given(st.floats(0.01, 5), st.floats(-1e3, 1e3))
    def test_bounded_by_one(self, s, t):
        for m in (Laplace(s), Gaussian(s)):
            v = cf_linear(m, t)
            assert abs(v) <= 1.0
            assert v == cf_linear(m, -t)


class TestNorms:
    def test_wrapped_laplace_closed_form(self):
        lam = 2.54
        closed = ell1_norm_circular(WrappedLaplace(lam))
        assert closed == pytest.approx(7.9797, abs=5e-4)
        assert closed == pytest.approx(partial_sum_ell1(lam), abs=1e-8)

    def test_wrapped_laplace_mpmath(self):
        for lam in (0.5, 1.74, 2.54, 7.0):
            ref = 1 + 2 * mpmath.nsum(lambda l: lam**2 / (l**2 + lam**2), [1, mpmath.inf])
            assert ell1_norm_circular(WrappedLaplace(lam)) == pytest.approx(float(ref), abs=1e-8)

    def test_wrapped_laplace_monotone_in_lambda(self):
        vals = [ell1_norm_circular(WrappedLaplace(l)) for l in (0.5, 1, 2, 5, 10, 100)]
        assert all(a < b for a, b in zip(vals, vals[1:]))
        assert vals[-1] >= math.pi * 100

    def test_custom_table_delta(self):
        m = CircularCustom(Smoothness("os", degree=2.0), table=(1.0,))
        assert ell1_norm_circular(m) == 1.0
        assert m.cf(3) == 0

    def test_custom_func_matches_closed_form(self):
        lam = 1.74
        m = CircularCustom(Smoothness("os", degree=2.0), func=lambda l: lam**2 / (l * l + lam**2))
        assert ell1_norm_circular(m) == pytest.approx(WrappedLaplace(lam).ell1_norm(), rel=1e-10)

    def test_custom_non_summable_rejected(self):
        with pytest.raises(ValueError):
            CircularCustom(Smoothness("os", degree=1.0), func=lambda l: 1 / (1 + np.abs(l)))
        with pytest.raises(ValueError):
            LinearCustom(lambda t: 1 / (1 + np.abs(t)), Smoothness("os", degree=0.5))

    def test_nonoise(self):
        assert ell1_norm_circular(CircularNoNoise()) == 1.0
        assert l1_norm_linear(LinearNoNoise()) == math.inf

    def test_laplace_l1(self):
        s = 0.1
        assert l1_norm_linear(Laplace(s)) == pytest.approx(math.pi / s, rel=1e-15)
        q = 2 * integrate.quad(lambda t: 1 / (1 + s * s * t * t), 0, 1e6, limit=500)[0]
        # truncation at 1e6 leaves 2/(s^2 1e6) = 2e-4 out of 31.4
        assert l1_norm_linear(Laplace(s)) == pytest.approx(q, rel=1e-5)
        assert l1_norm_linear(Laplace(2 * s)) == pytest.approx(l1_norm_linear(Laplace(s)) / 2)

    def test_gaussian_l1(self):
        q = integrate.quad(lambda t: math.exp(-t * t / 2), -np.inf, np.inf, epsabs=1e-13)[0]
        assert l1_norm_linear(Gaussian(1.0)) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-15)
        assert l1_norm_linear(Gaussian(1.0)) == pytest.approx(q, rel=1e-10)

    def test_linear_custom_quadrature(self):
        m = LinearCustom(lambda t: 1 / (1 + 0.04 * t * t))
        assert l1_norm_linear(m) == pytest.approx(math.pi / 0.2, rel=1e-8)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.01, 1.0), st.floats(0.5, 60.0))
    def test_inverse_norms_closed_vs_quadrature(self, s, T):
        models = [Laplace(s)]
        if s * T < 12:  # beyond this 1/f overflows the generic integrand
            models.append(Gaussian(s))
        for m in models:
            closed = m.inverse_norms(T)
            generic = super(type(m), m).inverse_norms(T)
            np.testing.assert_allclose(np.ravel(closed[0]), generic[0], rtol=1e-8)
            np.testing.assert_allclose(np.ravel(closed[1]), generic[1], rtol=1e-8)


class TestParse:
    @pytest.mark.parametrize("text,setting,expected", [
        ("laplace:0.075", "linear", Laplace(0.075)),
        ("wrapped_laplace:2.54", "circular", WrappedLaplace(2.54)),
        ("gaussian:0.1", "linear", Gaussian(0.1)),
        ("none", "linear", LinearNoNoise()),
        ("none", "circular", CircularNoNoise()),
    ])
    def test_round_trip(self, text, setting, expected):
        assert parse_noise(text, setting) == expected

    @pytest.mark.parametrize("text", ["laplace", "cauchy:1", "laplace:abc", "laplace:-1", "wrapped_laplace:2"])
    def test_rejected(self, text):
        with pytest.raises(ValueError):
            parse_noise(text, "linear")

    def test_is_circular(self):
        assert is_circular_model(WrappedLaplace(1.0))
        assert not is_circular_model(Laplace(1.0))


def test_gaussian_is_supersmooth():
    sm = Gaussian(0.2).smoothness
    assert sm.is_ss and sm.a == 2.0 and sm.b == pytest.approx(0.02)
    with pytest.raises(ValueError):
        Smoothness("ss", b=0.0, a=2.0)
