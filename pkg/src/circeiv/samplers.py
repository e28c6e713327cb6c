"""Seeded random variates for the simulation studies.

Every draw goes through a :class:`numpy.random.Generator`. :func:`make_rng`
derives an independent stream from ``(seed, stream)`` so that replication
``r`` of an experiment always sees the same numbers, whatever order or process
it runs in.
"""

from __future__ import annotations

import numpy as np

from .circ_core import wrap

__all__ = [
    "make_rng",
    "sample_von_mises",
    "sample_wrapped_laplace",
    "sample_laplace",
    "sample_gaussian",
    "sample_uniform01",
]


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator for replication ``stream`` of a run seeded with ``seed``."""
    if seed < 0 or stream < 0:
        raise ValueError("seed and stream must be non-negative")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.PCG64(ss))


def _best_fisher(kappa, size, rng, stats=None):
    # Best & Fisher (1979) envelope rejection; returns angles in [0, pi]
    # with a random sign, centred at zero.
    tau = 1.0 + np.sqrt(1.0 + 4.0 * kappa * kappa)
    rho = (tau - np.sqrt(2.0 * tau)) / (2.0 * kappa)
    r = (1.0 + rho * rho) / (2.0 * rho)
    out = np.empty(size)
    todo = np.arange(size)
    proposed = 0
    while todo.size:
        m = todo.size
        u1, u2, u3 = rng.random(m), rng.random(m), rng.random(m)
        z = np.cos(np.pi * u1)
        f = (1.0 + r * z) / (r + z)
        c = kappa * (r - f)
        with np.errstate(divide="ignore"):
            ok = (c * (2.0 - c) - u2 > 0.0) | (np.log(c / u2) + 1.0 - c >= 0.0)
        proposed += m
        acc = todo[ok]
        f_ok = np.clip(f[ok], -1.0, 1.0)
        out[acc] = np.where(u3[ok] > 0.5, 1.0, -1.0) * np.arccos(f_ok)
        todo = todo[~ok]
    if stats is not None:
        stats["proposed"] = stats.get("proposed", 0) + proposed
        stats["accepted"] = stats.get("accepted", 0) + size
    return out


def sample_von_mises(mu, kappa, rng, size=None, stats=None):
    """Von Mises draws with density proportional to ``exp(kappa cos(theta - mu))``.

    Parameters
    ----------
    mu : float
        Mean direction.
    kappa : float
        Concentration, strictly positive.
    rng : numpy.random.Generator
    size : int, optional
        Number of draws; a scalar is returned when omitted.
    stats : dict, optional
        Filled with ``proposed``/``accepted`` counts of the rejection step.

    Returns
    -------
    float or np.ndarray
        Angles in ``[-pi, pi)``.
    """
    if not kappa > 0:
        raise ValueError("von Mises concentration must be positive")
    m = 1 if size is None else int(size)
    if kappa < 1e-8:
        draws = rng.uniform(-np.pi, np.pi, m)
    else:
        draws = _best_fisher(float(kappa), m, rng, stats)
    out = wrap(draws + mu)
    out = np.atleast_1d(out)
    return float(out[0]) if size is None else out


def sample_laplace(sigma, rng, size=None):
    """Centred Laplace draws with scale ``sigma`` by CDF inversion."""
    if not sigma > 0:
        raise ValueError("Laplace scale must be positive")
    # |X| is exponential: invert its CDF on 1 - U in (0, 1], then attach a sign
    e = -np.log1p(-rng.random(size))
    sign = np.where(rng.random(size) < 0.5, -1.0, 1.0)
    return sigma * sign * e


def sample_wrapped_laplace(lam, rng, size=None):
    """Wrapped Laplace angles whose Fourier coefficients are ``lam^2/(l^2+lam^2)``."""
    if not lam > 0:
        raise ValueError("wrapped Laplace scale must be positive")
    return wrap(sample_laplace(1.0 / lam, rng, size))


def sample_gaussian(sigma, rng, size=None):
    """Centred normal draws with standard deviation ``sigma``."""
    if not sigma > 0:
        raise ValueError("Gaussian scale must be positive")
    return sigma * rng.standard_normal(size)


def sample_uniform01(rng, size=None):
    return rng.random(size)
