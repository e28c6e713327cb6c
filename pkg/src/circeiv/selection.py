"""Goldenshluger-Lepski comparison shared by both estimators.

Candidates are indexed from the smoothest (index 0) to the roughest. For the
Fourier estimator that is increasing cut-off ``L``; for the sinc-kernel
estimator it is decreasing bandwidth ``h``. With either family, the pairwise
"intersection" estimator of candidates ``i`` and ``k`` is simply the
smoother of the two, so the comparison term reduces to

    A_i = max(0, max_{k > i} (|est_k - est_i| - sqrt_v_k))

and the selected index minimises ``A_i + sqrt_v_i`` (first index on ties).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SelectionDiagnostics", "gl_compare", "EstimatorConfig"]


@dataclass(frozen=True)
class SelectionDiagnostics:
    """Everything evaluated while picking one smoothing parameter.

    Attributes
    ----------
    candidates : np.ndarray
        Levels ``L`` or bandwidths ``h``, smoothest first.
    estimates : np.ndarray
        Component estimate at each candidate.
    A : np.ndarray
        Comparison term per candidate (non-negative).
    sqrt_v : np.ndarray
        Penalised variance majorant per candidate.
    index : int
        Position of the selected candidate.
    c0 : float
        Tuning constant used in the penalty (``nan`` when no selection ran).
    """

    candidates: np.ndarray
    estimates: np.ndarray
    A: np.ndarray
    sqrt_v: np.ndarray
    index: int
    c0: float

    @property
    def selected(self):
        return self.candidates[self.index]

    @property
    def estimate(self) -> float:
        return float(self.estimates[self.index])

    @property
    def criterion(self) -> np.ndarray:
        return self.A + self.sqrt_v


def gl_compare(estimates, sqrt_v):
    """Return ``(A, index)`` for candidates ordered smoothest first."""
    est = np.asarray(estimates, dtype=float)
    sv = np.asarray(sqrt_v, dtype=float)
    if est.shape != sv.shape or est.ndim != 1 or est.size == 0:
        raise ValueError("estimates and sqrt_v must be equal-length non-empty vectors")
    gap = np.abs(est[None, :] - est[:, None]) - sv[None, :]
    upper = np.triu(np.ones(gap.shape, dtype=bool), k=1)
    gap = np.where(upper, gap, 0.0)
    A = np.maximum(gap.max(axis=1), 0.0)
    index = int(np.argmin(A + sv))
    return A, index


@dataclass(frozen=True)
class EstimatorConfig:
    """Tuning of the final angular estimators.

    Parameters
    ----------
    c0 : float or (float, float), optional
        Penalty constants for the sine and cosine components. ``None`` picks
        the calibrated defaults (0.08 circular, 0.4 linear).
    mode : {"auto", "os", "ss"}
        ``"auto"`` follows the noise model's smoothness tag. ``"ss"`` skips
        selection and uses the closed-form level or bandwidth.
    ss_params : (float, float), optional
        ``(b, a)`` on the circle or ``(gamma, rho)`` on the line, overriding
        the values carried by the noise model.
    grid : {"admissible", "simulation"}
        Linear setting only. ``"admissible"`` keeps ``h = 1/k`` passing the
        norm-ratio test; ``"simulation"`` keeps ``1/k`` for ``k <= n/log n``.
    """

    c0: object = None
    mode: str = "auto"
    ss_params: tuple = None
    grid: str = "admissible"

    def __post_init__(self):
        if self.mode not in ("auto", "os", "ss"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.grid not in ("admissible", "simulation"):
            raise ValueError(f"unknown grid {self.grid!r}")
        for c in self._c0_pair(1.0):
            if not c > 0:
                raise ValueError("tuning constants must be positive")

    def _c0_pair(self, default):
        c = default if self.c0 is None else self.c0
        if np.ndim(c) == 0:
            return float(c), float(c)
        c1, c2 = c
        return float(c1), float(c2)

    def resolved_mode(self, noise) -> str:
        if self.mode != "auto":
            return self.mode
        return "ss" if noise.smoothness.is_ss else "os"
