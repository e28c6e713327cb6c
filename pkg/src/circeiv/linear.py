"""Regression with a real covariate in [0, 1] observed with additive error.

The component moments are estimated with a deconvolution kernel built on the
sinc kernel, whose Fourier transform is the indicator of ``[-1, 1]``. For a
bandwidth ``h`` and cut-off ``T = 1/h`` each observation contributes

    w(u) = (1 / 2 pi) int_{-T}^{T} exp(i t u) / f(t) dt,   u = Z_k - x,

and since the product of two sinc transforms is again an indicator, smoothing
the estimate at ``h`` with the kernel at ``h'`` gives the estimate at
``max(h, h')``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .circ_core import atan2, wrap
from .circular import MDiagnostics
from .exceptions import ConfigurationError, IllPosedWeightError, UndefinedDirectionError
from .noise import Laplace, LinearNoNoise
from .selection import EstimatorConfig, SelectionDiagnostics, gl_compare

__all__ = [
    "LinearDataset",
    "SincKernel",
    "deconv_weight",
    "projection_estimate_linear",
    "projection_estimates_linear",
    "double_smooth_estimate",
    "v0_linear",
    "bandwidth_grid",
    "simulation_grid",
    "gl_select_bandwidth",
    "h_opt_ss",
    "estimate_m_linear",
    "DEFAULT_C0_LINEAR",
]

DEFAULT_C0_LINEAR = 0.4
_IMAG_TOL = 1e-10
_SERIES_CUT = 0.5  # |u T| below which the power series replaces closed forms
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


@dataclass(frozen=True)
class SincKernel:
    """``K(y) = sin(y) / (pi y)``; its transform is ``1`` on ``[-1, 1]``."""

    M: float = 1.0  # sup norm of the transform

    @staticmethod
    def ft(t):
        return (np.abs(np.asarray(t, dtype=float)) <= 1.0).astype(float)

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        return np.sinc(y / np.pi) / np.pi


@dataclass(frozen=True)
class LinearDataset:
    """Angular responses ``theta`` and real noisy covariates ``z``."""

    theta: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        z = np.atleast_1d(np.asarray(self.z, dtype=float))
        if theta.ndim != 1 or theta.shape != z.shape or theta.size < 1:
            raise ValueError("theta and z must be 1-d arrays of equal positive length")
        if not np.all(np.isfinite(z)):
            raise ValueError("covariates must be finite")
        object.__setattr__(self, "theta", np.atleast_1d(wrap(theta)))
        object.__setattr__(self, "z", z)

    @property
    def n(self) -> int:
        return self.theta.size

    @cached_property
    def sin_theta(self) -> np.ndarray:
        return np.sin(self.theta)

    @cached_property
    def cos_theta(self) -> np.ndarray:
        return np.cos(self.theta)

    def weights(self, component) -> np.ndarray:
        if component in (1, "sin"):
            return self.sin_theta
        if component in (2, "cos"):
            return self.cos_theta
        raise ValueError(f"unknown component {component!r}")

    def permuted(self, perm) -> "LinearDataset":
        return LinearDataset(self.theta[perm], self.z[perm])


def _cos_moment(k, u, T):
    """``int_0^T t^k cos(t u) dt`` for k in {0, 2}, elementwise in ``u``."""
    u = np.asarray(u, dtype=float)
    v = u * T
    small = np.abs(v) < _SERIES_CUT
    out = np.empty_like(u)
    # power series: sum_m (-1)^m u^(2m) T^(2m+k+1) / ((2m)! (2m+k+1))
    vs = v[small]
    acc = np.zeros_like(vs)
    term = np.ones_like(vs)
    for m in range(14):
        acc += term / (2 * m + k + 1)
        term = -term * vs * vs / ((2 * m + 1) * (2 * m + 2))
    out[small] = acc * T ** (k + 1)
    ub = u[~small]
    s, c = np.sin(ub * T), np.cos(ub * T)
    if k == 0:
        out[~small] = s / ub
    elif k == 2:
        out[~small] = T * T * s / ub + 2.0 * T * c / ub**2 - 2.0 * s / ub**3
    else:
        raise ValueError("only k = 0 and k = 2 are implemented")
    return out


def _quadrature_weight(u, T, noise):
    # composite Gauss-Legendre on [-T, T], about one panel per oscillation
    u = np.asarray(u, dtype=float)
    umax = float(np.max(np.abs(u))) if u.size else 0.0
    panels = max(8, int(math.ceil(umax * T / math.pi)) + 8)
    edges = np.linspace(-T, T, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    wq = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    f = np.asarray(noise.cf(t), dtype=complex)
    if np.any(f == 0):
        raise IllPosedWeightError("characteristic function vanishes inside the kernel support")
    vals = np.exp(1j * u[:, None] * t[None, :]) / f[None, :]
    out = vals @ wq / (2.0 * np.pi)
    if np.any(np.abs(out.imag) > _IMAG_TOL * (1.0 + np.abs(out.real))):
        raise ValueError("deconvolution weight is not real; characteristic function is not Hermitian")
    return out.real


def deconv_weight(u, h, noise):
    """Deconvolution sinc-kernel weight at offsets ``u = Z - x`` for bandwidth ``h``.

    Laplace and error-free models use exact antiderivatives; any other model
    is integrated by composite Gauss-Legendre quadrature.
    """
    if not h > 0:
        raise ValueError("bandwidth must be positive")
    T = 1.0 / h
    u_arr = np.asarray(u, dtype=float)
    flat = np.atleast_1d(u_arr).ravel()
    if isinstance(noise, LinearNoNoise):
        out = _cos_moment(0, flat, T) / np.pi
    elif isinstance(noise, Laplace):
        s2 = noise.sigma**2
        out = (_cos_moment(0, flat, T) + s2 * _cos_moment(2, flat, T)) / np.pi
    else:
        out = _quadrature_weight(flat, T, noise)
    out = out.reshape(u_arr.shape)
    return out.item() if out.ndim == 0 else out


def _check_x(x):
    if not 0.0 <= x <= 1.0:
        warnings.warn(f"evaluation point {x} lies outside [0, 1]", stacklevel=3)


def projection_estimates_linear(z, weights, hs, noise, x):
    """Deconvolution estimates ``(1/n) sum_k w_k weight(Z_k - x, h)`` for each ``h`` in ``hs``."""
    z = np.asarray(z, dtype=float)
    w = np.asarray(weights, dtype=float)
    hs = np.atleast_1d(np.asarray(hs, dtype=float))
    u = z - x
    out = np.empty(hs.size)
    for i, h in enumerate(hs):
        out[i] = np.sum(w * deconv_weight(u, h, noise)) / z.size
    return out


def projection_estimate_linear(data: LinearDataset, weights, h: float, noise, x: float) -> float:
    """Single deconvolution kernel estimate at bandwidth ``h``."""
    if not 0.0 < h <= 1.0:
        raise ValueError("bandwidth must lie in (0, 1]")
    _check_x(x)
    return float(projection_estimates_linear(data.z, weights, [h], noise, x)[0])


def double_smooth_estimate(data: LinearDataset, weights, h: float, h_prime: float, noise, x: float) -> float:
    """Estimate at ``h`` smoothed again by the kernel at ``h_prime``; equals the estimate at ``max(h, h_prime)``."""
    return projection_estimate_linear(data, weights, max(h, h_prime), noise, x)


def _inverse_norms(noise, h):
    T = 1.0 / np.asarray(h, dtype=float)
    return noise.inverse_norms(T)


def v0_linear(n: int, h, noise):
    """Variance majorant of the deconvolution estimator at bandwidth ``h``."""
    h = np.asarray(h, dtype=float)
    if np.any(h <= 0) or n < 1:
        raise ValueError("need n >= 1 and h > 0")
    l1, l2 = _inverse_norms(noise, h)
    f1 = noise.l1_norm()
    with np.errstate(invalid="ignore", over="ignore"):
        first = np.where(np.isinf(f1), np.inf, l2 * f1)
    out = np.minimum(first, l1 * l1) / ((2.0 * np.pi) ** 2 * n)
    out = np.asarray(out, dtype=float)
    return out.item() if out.ndim == 0 else out


def bandwidth_grid(n: int, noise) -> np.ndarray:
    """Admissible bandwidths ``1/k``, ``k = 1..n``, in decreasing order."""
    if n < 3:
        raise ConfigurationError("bandwidth grid needs n >= 3")
    k = np.arange(1, n + 1, dtype=float)
    l1, l2 = _inverse_norms(noise, 1.0 / k)
    with np.errstate(invalid="ignore", over="ignore"):
        ratio = l2 / (l1 * l1)
    keep = ratio >= math.log(n) / n
    if not np.any(keep):
        raise ConfigurationError(f"no admissible bandwidth for n={n}")
    return 1.0 / k[keep]


def simulation_grid(n: int) -> np.ndarray:
    """Bandwidths ``1/k`` for ``1 <= k <= n / log n``, decreasing."""
    if n < 3:
        raise ConfigurationError("bandwidth grid needs n >= 3")
    kmax = int(math.floor(n / math.log(n)))
    return 1.0 / np.arange(1, kmax + 1, dtype=float)


def gl_select_bandwidth(data: LinearDataset, weights, noise, x: float, c0: float, grid=None):
    """Data-driven bandwidth for one component at the point ``x``.

    Parameters
    ----------
    grid : array_like, optional
        Candidate bandwidths; defaults to :func:`bandwidth_grid`.

    Returns
    -------
    (float, SelectionDiagnostics)
    """
    if not c0 > 0:
        raise ValueError("c0 must be positive")
    _check_x(x)
    n = data.n
    if grid is None:
        grid = bandwidth_grid(n, noise)
    grid = np.sort(np.asarray(grid, dtype=float))[::-1]
    est = projection_estimates_linear(data.z, weights, grid, noise, x)
    v = c0 * math.log(n) * np.atleast_1d(v0_linear(n, grid, noise))
    sqrt_v = np.sqrt(v)
    A, idx = gl_compare(est, sqrt_v)
    diag = SelectionDiagnostics(grid, est, A, sqrt_v, idx, float(c0))
    return float(grid[idx]), diag


def h_opt_ss(n: int, gamma: float, rho: float) -> float:
    """Regularity-free bandwidth ``(log n / 2 gamma)^(-1/rho)``, capped at 1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not (gamma > 0 and rho > 0):
        raise ValueError("gamma and rho must be positive")
    return min(1.0, (math.log(n) / (2.0 * gamma)) ** (-1.0 / rho))


def estimate_m_linear(data: LinearDataset, noise, x: float, config: EstimatorConfig = None):
    """Estimate the regression angle at ``x`` for a real covariate.

    Returns
    -------
    (float, MDiagnostics)
    """
    config = config or EstimatorConfig()
    mode = config.resolved_mode(noise)
    if mode == "ss":
        gamma, rho = config.ss_params or (noise.smoothness.b, noise.smoothness.a)
        h = h_opt_ss(max(data.n, 2), gamma, rho)
        _check_x(x)
        p1 = float(projection_estimates_linear(data.z, data.sin_theta, [h], noise, x)[0])
        p2 = float(projection_estimates_linear(data.z, data.cos_theta, [h], noise, x)[0])
        diag = MDiagnostics(p1, p2, (h, h), mode="ss")
    else:
        c1, c2 = config._c0_pair(DEFAULT_C0_LINEAR)
        grid = simulation_grid(data.n) if config.grid == "simulation" else bandwidth_grid(data.n, noise)
        h1, d1 = gl_select_bandwidth(data, data.sin_theta, noise, x, c1, grid)
        h2, d2 = gl_select_bandwidth(data, data.cos_theta, noise, x, c2, grid)
        p1, p2 = d1.estimate, d2.estimate
        diag = MDiagnostics(p1, p2, (h1, h2), d1, d2, mode="os")
    if p1 == 0.0 and p2 == 0.0:
        raise UndefinedDirectionError("both component estimates vanish")
    return atan2(p1, p2), diag
