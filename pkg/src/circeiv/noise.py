"""Characteristic functions of the covariate measurement error.

Two families are provided. Circular models are indexed by integer frequencies
``l`` (Fourier coefficients on the circle); linear models are indexed by real
frequencies ``t``. Every model carries a smoothness tag, either ordinary
smooth (polynomial decay) or supersmooth (exponential decay), which the
estimators use to decide between data-driven selection and a closed-form
tuning parameter.

Strings such as ``"laplace:0.075"`` or ``"wrapped_laplace:2.54"`` are turned
into models by :func:`parse_noise`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate, special

__all__ = [
    "Smoothness",
    "WrappedLaplace",
    "CircularCustom",
    "CircularNoNoise",
    "Laplace",
    "Gaussian",
    "LinearCustom",
    "LinearNoNoise",
    "cf_circular",
    "cf_linear",
    "ell1_norm_circular",
    "l1_norm_linear",
    "parse_noise",
]


@dataclass(frozen=True)
class Smoothness:
    """Decay class of a characteristic function.

    ``kind`` is ``"os"`` or ``"ss"``. For ``"os"`` the only parameter is the
    degree of ill-posedness ``degree``. For ``"ss"`` on the circle the bound
    is ``(|l|+1)^c exp(-b |l|^a)``; on the line it is
    ``(1+t^2)^(-rho0/2) exp(-gamma |t|^rho)`` and ``b``/``a`` hold
    ``gamma``/``rho``.
    """

    kind: str
    degree: float = 0.0
    b: float = 0.0
    a: float = 0.0
    c: float = 0.0

    def __post_init__(self):
        if self.kind not in ("os", "ss"):
            raise ValueError(f"unknown smoothness kind {self.kind!r}")
        if self.kind == "ss" and (self.b <= 0 or self.a <= 0):
            raise ValueError("supersmooth decay needs b > 0 and a > 0")

    @property
    def is_ss(self) -> bool:
        return self.kind == "ss"


# --------------------------------------------------------------------------
# circular models


class _CircularModel:
    smoothness: Smoothness

    def cf(self, l):
        raise NotImplementedError

    def ell1_norm(self) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class WrappedLaplace(_CircularModel):
    """Centred wrapped Laplace error with concentration ``lam``.

    Fourier coefficients ``lam^2 / (l^2 + lam^2)``; ordinary smooth of degree 2.
    """

    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("wrapped Laplace scale must be positive")

    @property
    def smoothness(self) -> Smoothness:
        return Smoothness("os", degree=2.0)

    def cf(self, l):
        l = np.asarray(l, dtype=float)
        lam2 = self.lam * self.lam
        return (lam2 / (l * l + lam2)).astype(complex)

    def ell1_norm(self) -> float:
        x = math.pi * self.lam
        return x / math.tanh(x)

    def circular_variance(self) -> float:
        return 1.0 / (1.0 + self.lam**2)


@dataclass(frozen=True)
class CircularNoNoise(_CircularModel):
    """Error-free covariates, ``f(l) = 1`` for all ``l``.

    The l1 norm is reported as 1 (only the zero frequency carries mass in the
    error distribution), which keeps every variance bound finite.
    """

    @property
    def smoothness(self) -> Smoothness:
        return Smoothness("os", degree=0.0)

    def cf(self, l):
        return np.ones(np.shape(l), dtype=complex)

    def ell1_norm(self) -> float:
        return 1.0


@dataclass(frozen=True)
class CircularCustom(_CircularModel):
    """User supplied Fourier coefficients.

    Either ``func`` (vectorised callable of integer frequencies) or ``table``
    (coefficients for ``l = 0, 1, ..., len(table)-1``; negative frequencies
    are the conjugates, frequencies past the table are zero) must be given.
    """

    smoothness: Smoothness
    func: Optional[Callable] = None
    table: Optional[tuple] = None

    def __post_init__(self):
        if (self.func is None) == (self.table is None):
            raise ValueError("give exactly one of func or table")
        if self.smoothness.kind == "os" and self.table is None and self.smoothness.degree <= 1:
            raise ValueError("ordinary smooth circular noise needs degree > 1")

    def cf(self, l):
        l = np.asarray(l)
        if self.func is not None:
            return np.asarray(self.func(l), dtype=complex) * np.ones(l.shape)
        tab = np.asarray(self.table, dtype=complex)
        li = np.abs(l).astype(int)
        inside = li < tab.size
        out = np.zeros(l.shape, dtype=complex)
        vals = tab[np.where(inside, li, 0)]
        vals = np.where(l < 0, np.conj(vals), vals)
        out[...] = np.where(inside, vals, 0.0)
        return out

    def ell1_norm(self) -> float:
        if self.table is not None:
            tab = np.abs(np.asarray(self.table, dtype=complex))
            return float(tab[0] + 2.0 * tab[1:].sum())
        return _custom_ell1(self.cf, self.smoothness)


def _custom_ell1(cf, smoothness, tol=1e-10, n_max=2**24):
    """Partial sums of ``sum_l |f(l)|`` with an integral tail estimate.

    For ordinary smooth decay ``|f(l)| ~ C l^-nu`` the remainder past ``N`` is
    approximated by ``2 |f(N)| N^nu (N + 1/2)^(1-nu) / (nu - 1)``. Blocks grow
    fourfold until the tail-corrected total moves by less than ``tol``.
    """
    total = abs(complex(np.asarray(cf(np.array([0])), dtype=complex)[0]))
    lo, n, prev = 1, 1024, math.inf
    while True:
        l = np.arange(lo, n + 1)
        block = np.abs(cf(l)) + np.abs(cf(-l))
        total += math.fsum(block)
        last = 0.5 * float(block[-1])
        if smoothness.kind == "os":
            nu = smoothness.degree
            tail = 2.0 * last * n**nu * (n + 0.5) ** (1.0 - nu) / (nu - 1.0)
        else:
            tail = 0.0
        corrected = total + tail
        if abs(corrected - prev) < tol or n >= n_max:
            return float(corrected)
        prev = corrected
        lo, n = n + 1, 4 * n


# --------------------------------------------------------------------------
# linear models


class _LinearModel:
    smoothness: Smoothness

    def cf(self, t):
        raise NotImplementedError

    def l1_norm(self) -> float:
        raise NotImplementedError

    def inverse_norms(self, T):
        """Return ``(int |1/f|, int |1/f|^2)`` over ``[-T, T]``."""
        T = np.atleast_1d(np.asarray(T, dtype=float))
        l1 = np.empty_like(T)
        l2 = np.empty_like(T)
        for i, tt in enumerate(T):
            g1 = lambda t: 1.0 / abs(complex(self.cf(np.array(t))))
            g2 = lambda t: 1.0 / abs(complex(self.cf(np.array(t)))) ** 2
            l1[i] = integrate.quad(g1, -tt, tt, epsrel=1e-12, epsabs=0, limit=200)[0]
            l2[i] = integrate.quad(g2, -tt, tt, epsrel=1e-12, epsabs=0, limit=200)[0]
        return l1, l2


@dataclass(frozen=True)
class Laplace(_LinearModel):
    """Centred Laplace error with scale ``sigma``; ``f(t) = 1 / (1 + sigma^2 t^2)``."""

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("Laplace scale must be positive")

    @property
    def smoothness(self) -> Smoothness:
        return Smoothness("os", degree=2.0)

    def cf(self, t):
        t = np.asarray(t, dtype=float)
        return (1.0 / (1.0 + self.sigma**2 * t * t)).astype(complex)

    def l1_norm(self) -> float:
        return math.pi / self.sigma

    def inverse_norms(self, T):
        T = np.asarray(T, dtype=float)
        s2 = self.sigma**2
        l1 = 2.0 * T + (2.0 / 3.0) * s2 * T**3
        l2 = 2.0 * T + (4.0 / 3.0) * s2 * T**3 + 0.4 * s2 * s2 * T**5
        return l1, l2

    def variance(self) -> float:
        return 2.0 * self.sigma**2


@dataclass(frozen=True)
class Gaussian(_LinearModel):
    """Centred normal error with standard deviation ``sigma`` (supersmooth, ``gamma = sigma^2/2``, ``rho = 2``)."""

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("Gaussian scale must be positive")

    @property
    def smoothness(self) -> Smoothness:
        return Smoothness("ss", b=self.sigma**2 / 2.0, a=2.0, c=0.0)

    def cf(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(-0.5 * self.sigma**2 * t * t).astype(complex)

    def l1_norm(self) -> float:
        return math.sqrt(2.0 * math.pi) / self.sigma

    def inverse_norms(self, T):
        # int_0^T exp(a t^2) dt = exp(a T^2) * dawsn(sqrt(a) T) / sqrt(a)
        T = np.asarray(T, dtype=float)
        s = self.sigma
        with np.errstate(over="ignore"):
            r1 = math.sqrt(0.5) * s
            l1 = 2.0 * np.exp(0.5 * s * s * T * T) * special.dawsn(r1 * T) / r1
            l2 = 2.0 * np.exp(s * s * T * T) * special.dawsn(s * T) / s
        return l1, l2

    def variance(self) -> float:
        return self.sigma**2


@dataclass(frozen=True)
class LinearNoNoise(_LinearModel):
    """Error-free covariates on the line, ``f(t) = 1``; its L1 norm is infinite."""

    @property
    def smoothness(self) -> Smoothness:
        return Smoothness("os", degree=0.0)

    def cf(self, t):
        return np.ones(np.shape(t), dtype=complex)

    def l1_norm(self) -> float:
        return math.inf

    def inverse_norms(self, T):
        T = np.asarray(T, dtype=float)
        return 2.0 * T, 2.0 * T

    def variance(self) -> float:
        return 0.0


@dataclass(frozen=True)
class LinearCustom(_LinearModel):
    """User supplied characteristic function ``func(t)`` with a declared smoothness tag."""

    func: Callable
    smoothness: Smoothness = field(default_factory=lambda: Smoothness("os", degree=2.0))

    def __post_init__(self):
        if self.smoothness.kind == "os" and self.smoothness.degree <= 1:
            raise ValueError("ordinary smooth linear noise needs degree > 1")

    def cf(self, t):
        t = np.asarray(t, dtype=float)
        return np.asarray(self.func(t), dtype=complex) * np.ones(t.shape)

    def l1_norm(self) -> float:
        g = lambda t: abs(complex(self.cf(np.array(t))))
        val, _ = integrate.quad(g, -np.inf, np.inf, epsrel=1e-10, epsabs=0, limit=500)
        return float(val)


# --------------------------------------------------------------------------
# functional interface


def cf_circular(model, l):
    """Fourier coefficient ``E exp(i l eps)`` of a circular error model."""
    return model.cf(l)


def cf_linear(model, t):
    """Characteristic function ``E exp(i t eps)`` of a linear error model."""
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError("frequency must be finite")
    return model.cf(t)


def ell1_norm_circular(model) -> float:
    """``sum_l |f(l)|`` over all integers."""
    return model.ell1_norm()


def l1_norm_linear(model) -> float:
    """``int |f(t)| dt`` over the real line."""
    return model.l1_norm()


_PARSERS = {
    "wrapped_laplace": lambda p: WrappedLaplace(p),
    "laplace": lambda p: Laplace(p),
    "gaussian": lambda p: Gaussian(p),
    "normal": lambda p: Gaussian(p),
}


def parse_noise(text: str, setting: str = "linear"):
    """Build a model from ``name:parameter`` text.

    ``setting`` (``"linear"`` or ``"circular"``) decides what ``"none"``
    means. Recognised names: ``laplace``, ``gaussian``, ``wrapped_laplace``,
    ``none``.
    """
    text = text.strip().lower()
    if text in ("none", "nonoise", "no_noise"):
        if setting == "circular":
            return CircularNoNoise()
        return LinearNoNoise()
    name, sep, arg = text.partition(":")
    if not sep or name not in _PARSERS:
        raise ValueError(f"cannot parse noise specification {text!r}")
    try:
        value = float(arg)
    except ValueError:
        raise ValueError(f"bad noise parameter in {text!r}") from None
    model = _PARSERS[name](value)
    is_circ = isinstance(model, _CircularModel)
    if is_circ != (setting == "circular"):
        raise ValueError(f"noise {name!r} does not match the {setting} setting")
    return model


def is_circular_model(model) -> bool:
    return isinstance(model, _CircularModel)
