"""Angular primitives: wrapping, the half-open atan2 and the cosine dissimilarity.

Angles are plain floats (or float arrays) in radians. Every constructor in the
package hands back values in ``[-pi, pi)``.
"""

from __future__ import annotations

import numpy as np

from .exceptions import UndefinedDirectionError

__all__ = [
    "wrap",
    "atan2",
    "circ_dist",
    "geodesic_dist",
    "mean_resultant",
    "circular_variance",
]

TWO_PI = 2.0 * np.pi


def wrap(theta):
    """Reduce angles modulo 2*pi onto ``[-pi, pi)``.

    Parameters
    ----------
    theta : float or array_like
        Angles in radians. Must be finite.

    Returns
    -------
    float or np.ndarray
        Equivalent angles in ``[-pi, pi)``.
    """
    t = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError("wrap: non-finite angle")
    out = np.mod(t + np.pi, TWO_PI) - np.pi
    # np.mod can round up to exactly 2*pi for tiny negative inputs
    out = np.where(out >= np.pi, out - TWO_PI, out)
    out = np.where(out < -np.pi, -np.pi, out)
    return out.item() if out.ndim == 0 else out


def atan2(w1, w2):
    """Angle of the plane point ``(w2, w1)`` with the -pi convention on the negative axis.

    ``w1`` is the sine-like ordinate and ``w2`` the cosine-like abscissa, so
    ``atan2(sin(t), cos(t)) == t``. On the negative horizontal half-axis
    (``w1 == 0``, ``w2 < 0``) the result is ``-pi`` regardless of the sign of
    zero, which keeps every output inside ``[-pi, pi)``.

    Raises
    ------
    UndefinedDirectionError
        If any pair is ``(0, 0)``.
    """
    a = np.asarray(w1, dtype=float)
    b = np.asarray(w2, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    if np.any((a == 0.0) & (b == 0.0)):
        raise UndefinedDirectionError("atan2 is undefined at (0, 0)")
    out = np.arctan2(a, b)
    # np.arctan2(+0.0, -1.0) is +pi
    out = np.where((a == 0.0) & (b < 0.0), -np.pi, out)
    return out.item() if out.ndim == 0 else out


def circ_dist(a, b):
    """Cosine dissimilarity ``1 - cos(a - b)``, valued in ``[0, 2]``."""
    out = 1.0 - np.cos(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    out = np.clip(out, 0.0, 2.0)
    return out.item() if out.ndim == 0 else out


def geodesic_dist(a, b):
    """Arc-length distance on the circle, in ``[0, pi]``."""
    d = np.abs(wrap(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)))
    return d


def mean_resultant(theta):
    """Mean resultant length and direction of a sample of angles.

    Returns
    -------
    (float, float)
        ``(R, mean_direction)``; the direction is ``nan`` when ``R == 0``.
    """
    t = np.asarray(theta, dtype=float)
    c = np.mean(np.cos(t))
    s = np.mean(np.sin(t))
    r = float(np.hypot(c, s))
    direction = atan2(s, c) if r > 0 else float("nan")
    return r, direction


def circular_variance(theta):
    """Sample circular variance ``1 - R``."""
    return 1.0 - mean_resultant(theta)[0]
