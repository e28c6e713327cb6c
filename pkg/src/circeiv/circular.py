"""Regression with a circular covariate observed with circular error.

The sine and cosine moments ``p1 = E[sin Theta | X] f_X`` and
``p2 = E[cos Theta | X] f_X`` are estimated by truncated Fourier series whose
coefficients are deconvolved by the error's Fourier coefficients. The
regression angle is ``atan2(p1, p2)``; the density of ``X`` cancels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .circ_core import atan2, wrap
from .exceptions import ConfigurationError, IllPosedWeightError, UndefinedDirectionError
from .selection import EstimatorConfig, SelectionDiagnostics, gl_compare

__all__ = [
    "CircularDataset",
    "MDiagnostics",
    "projection_estimate",
    "projection_estimates",
    "v0_circular",
    "level_grid",
    "gl_select_level",
    "l_opt_ss",
    "estimate_m_circular",
    "DEFAULT_C0",
]

DEFAULT_C0 = 0.08
_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class CircularDataset:
    """Responses ``theta`` and noisy circular covariates ``z`` (wrapped on construction)."""

    theta: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        z = np.atleast_1d(np.asarray(self.z, dtype=float))
        if theta.ndim != 1 or theta.shape != z.shape or theta.size < 1:
            raise ValueError("theta and z must be 1-d arrays of equal positive length")
        object.__setattr__(self, "theta", np.atleast_1d(wrap(theta)))
        object.__setattr__(self, "z", np.atleast_1d(wrap(z)))

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
        """``sin(theta)`` for component 1 / ``"sin"``, ``cos(theta)`` for 2 / ``"cos"``."""
        if component in (1, "sin"):
            return self.sin_theta
        if component in (2, "cos"):
            return self.cos_theta
        raise ValueError(f"unknown component {component!r}")

    def permuted(self, perm) -> "CircularDataset":
        return CircularDataset(self.theta[perm], self.z[perm])


def _inverse_cf(noise, lmax):
    l = np.arange(-lmax, lmax + 1)
    f = np.asarray(noise.cf(l), dtype=complex)
    if np.any(f == 0):
        bad = l[f == 0]
        raise IllPosedWeightError(f"Fourier coefficient of the error vanishes at l={bad[0]}")
    return l, 1.0 / f


def projection_estimates(z, weights, levels, noise, x):
    """Deconvolved Fourier estimates at every cut-off in ``levels``.

    Parameters
    ----------
    z : array_like
        Observed covariates.
    weights : array_like
        ``sin(theta_j)`` or ``cos(theta_j)``.
    levels : array_like of int
        Cut-offs ``L >= 0``, any order.
    noise : circular noise model
    x : float
        Evaluation point.

    Returns
    -------
    np.ndarray
        Real estimates aligned with ``levels``.
    """
    z = np.asarray(z, dtype=float)
    w = np.asarray(weights, dtype=float)
    levels = np.atleast_1d(np.asarray(levels, dtype=int))
    if np.any(levels < 0):
        raise ValueError("levels must be non-negative")
    lmax = int(levels.max())
    l, inv_f = _inverse_cf(noise, lmax)
    # a_l = mean_j w_j exp(i l z_j), computed for l >= 0 and conjugated for l < 0
    lpos = np.arange(lmax + 1)
    phase = np.exp(1j * lpos[:, None] * z[None, :])
    a_pos = (phase * w[None, :]).sum(axis=1) / z.size
    a = np.concatenate([np.conj(a_pos[:0:-1]), a_pos])
    terms = a * np.exp(-1j * l * x) * inv_f
    # cumulative sum over |l| <= L
    sym = terms[lmax:].copy()
    sym[1:] += terms[lmax - 1 :: -1]
    cum = np.cumsum(sym)[levels] / (2.0 * np.pi)
    resid = np.abs(cum.imag)
    if np.any(resid > _IMAG_TOL * (1.0 + np.abs(cum.real))):
        raise ValueError(
            "projection estimate has a non-negligible imaginary part; "
            "the characteristic function is not Hermitian"
        )
    return cum.real


def projection_estimate(data: CircularDataset, weights, L: int, noise, x: float) -> float:
    """Single Fourier-deconvolution estimate at cut-off ``L``."""
    return float(projection_estimates(data.z, weights, [L], noise, x)[0])


class _InverseSums:
    """Prefix sums of ``1/|f(l)|`` and ``1/|f(l)|^2`` over ``|l| <= L``."""

    def __init__(self, noise, lmax):
        _, inv_f = _inverse_cf(noise, lmax)
        mag = np.abs(inv_f)
        one = mag[lmax:].copy()
        one[1:] += mag[lmax - 1 :: -1]
        self.s1 = np.cumsum(one)
        two = mag[lmax:] ** 2
        two[1:] += mag[lmax - 1 :: -1] ** 2
        self.s2 = np.cumsum(two)
        self.ell1 = noise.ell1_norm()


def v0_circular(n: int, L, noise, _sums: _InverseSums = None):
    """Variance majorant of the Fourier estimator with ``n`` samples at cut-off ``L``."""
    L = np.asarray(L, dtype=int)
    if np.any(L < 1) or n < 1:
        raise ValueError("need n >= 1 and L >= 1")
    sums = _sums or _InverseSums(noise, 2 * int(L.max()))
    first = sums.s1[L] ** 2
    second = sums.ell1 * sums.s2[2 * L]
    out = np.minimum(first, second) / ((2.0 * np.pi) ** 2 * n)
    return out.item() if out.ndim == 0 else out


def level_grid(n: int, noise, _sums: _InverseSums = None) -> np.ndarray:
    """Admissible cut-offs ``L`` in ``1..n``, ascending."""
    if n < 3:
        raise ConfigurationError("level grid needs n >= 3")
    sums = _sums or _InverseSums(noise, 2 * n)
    L = np.arange(1, n + 1)
    ratio = sums.s2[2 * L] / sums.s1[L] ** 2
    grid = L[ratio >= math.log(n) / n]
    if grid.size == 0:
        raise ConfigurationError(f"no admissible level for n={n}")
    return grid


def gl_select_level(data: CircularDataset, weights, noise, x: float, c0: float, grid=None):
    """Data-driven cut-off for one component at the point ``x``.

    Returns
    -------
    (int, SelectionDiagnostics)
    """
    if not c0 > 0:
        raise ValueError("c0 must be positive")
    n = data.n
    if grid is None:
        sums = _InverseSums(noise, 2 * max(n, 1))
        grid = level_grid(n, noise, sums) if n >= 3 else np.array([1])
    else:
        grid = np.sort(np.asarray(grid, dtype=int))
        sums = _InverseSums(noise, 2 * int(grid.max()))
    est = projection_estimates(data.z, weights, grid, noise, x)
    v = c0 * math.log(n) * v0_circular(n, grid, noise, sums) if n > 1 else np.zeros(grid.size)
    sqrt_v = np.sqrt(np.atleast_1d(v))
    A, idx = gl_compare(est, sqrt_v)
    diag = SelectionDiagnostics(grid, est, A, sqrt_v, idx, float(c0))
    return int(grid[idx]), diag


def l_opt_ss(n: int, b: float, a: float) -> int:
    """Regularity-free cut-off ``round((log n / 2b)^(1/a))`` for supersmooth error, at least 1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not (b > 0 and a > 0):
        raise ValueError("b and a must be positive")
    val = (math.log(n) / (2.0 * b)) ** (1.0 / a)
    return max(1, int(math.floor(val + 0.5)))


@dataclass(frozen=True)
class MDiagnostics:
    """Per-component record behind an angular estimate."""

    p1: float
    p2: float
    selected: tuple
    sine: SelectionDiagnostics = None
    cosine: SelectionDiagnostics = None
    mode: str = "os"


def estimate_m_circular(data: CircularDataset, noise, x: float, config: EstimatorConfig = None):
    """Estimate the regression angle at ``x``.

    Under ordinary smooth error each component gets its own data-driven
    cut-off; under supersmooth error both use the closed-form level.

    Returns
    -------
    (float, MDiagnostics)
    """
    config = config or EstimatorConfig()
    mode = config.resolved_mode(noise)
    if mode == "ss":
        b, a = config.ss_params or (noise.smoothness.b, noise.smoothness.a)
        L = l_opt_ss(max(data.n, 2), b, a)
        p1 = projection_estimate(data, data.sin_theta, L, noise, x)
        p2 = projection_estimate(data, data.cos_theta, L, noise, x)
        diag = MDiagnostics(p1, p2, (L, L), mode="ss")
    else:
        c1, c2 = config._c0_pair(DEFAULT_C0)
        L1, d1 = gl_select_level(data, data.sin_theta, noise, x, c1)
        L2, d2 = gl_select_level(data, data.cos_theta, noise, x, c2)
        p1, p2 = d1.estimate, d2.estimate
        diag = MDiagnostics(p1, p2, (L1, L2), d1, d2, mode="os")
    if p1 == 0.0 and p2 == 0.0:
        raise UndefinedDirectionError("both component estimates vanish")
    return atan2(p1, p2), diag
