"""Simulation models, Monte Carlo risk, tuning calibration and real-data curves."""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import special

from . import __version__
from .circ_core import atan2, circ_dist, wrap
from .circular import CircularDataset, estimate_m_circular
from .exceptions import ReplicationFailureError, UndefinedDirectionError
from .linear import LinearDataset, estimate_m_linear
from .noise import Laplace, WrappedLaplace, is_circular_model
from .samplers import (
    make_rng,
    sample_laplace,
    sample_uniform01,
    sample_von_mises,
    sample_wrapped_laplace,
)
from .selection import EstimatorConfig

__all__ = [
    "SimulationModel",
    "lc_model",
    "cc_model",
    "RiskReport",
    "CalibrationCurve",
    "simulate_dataset",
    "run_monte_carlo",
    "calibrate_c0",
    "detect_plateau",
    "reliability_ratio",
    "bessel_ratio",
    "baseline_curves",
    "estimate_curve",
    "read_curve_csv",
    "GRID_LINEAR",
    "GRID_CIRCULAR",
]

GRID_LINEAR = (0.001, 0.0025, 0.005, 0.0075, 0.01, 0.025, 0.05, 0.075,
               0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 1.0, 2.0, 4.0)
GRID_CIRCULAR = (0.001, 0.0025, 0.005, 0.0075, 0.01, 0.02, 0.04, 0.05, 0.06,
                 0.08, 0.09, 0.1, 0.2, 0.4, 0.6, 1.0, 2.0, 4.0)

MAX_FAILURE_FRACTION = 0.05


def m_lc(x):
    """Regression angle of the linear-covariate benchmark."""
    x = np.asarray(x, dtype=float)
    return atan2(20.0 * x - 11.0, (10.0 * x - 5.0) ** 2 + 2.0)


def m_cc(x):
    """Regression angle of the circular-covariate benchmark."""
    x = np.asarray(x, dtype=float)
    return wrap(0.5 + np.cos(x + 3.0 * np.sin(x)))


@dataclass(frozen=True)
class SimulationModel:
    """A benchmark design.

    ``kind`` is ``"lc"`` (uniform covariate on [0, 1], Laplace error) or
    ``"cc"`` (near-uniform von Mises covariate, wrapped Laplace error).
    """

    kind: str
    regression: Callable
    noise: object
    zeta_kappa: float
    x_kappa: float = 0.0

    @property
    def circular(self) -> bool:
        return self.kind == "cc"

    def describe(self) -> dict:
        d = {"kind": self.kind, "zeta_kappa": self.zeta_kappa, "noise": _noise_dict(self.noise)}
        if self.circular:
            d["x_kappa"] = self.x_kappa
        return d


def _noise_dict(noise) -> dict:
    out = {"model": type(noise).__name__}
    try:
        out.update(asdict(noise))
    except TypeError:
        pass
    return {k: v for k, v in out.items() if not callable(v)}


def lc_model(sigma_eps: float, zeta_kappa: float = 10.0) -> SimulationModel:
    return SimulationModel("lc", m_lc, Laplace(sigma_eps), zeta_kappa)


def cc_model(lambda_eps: float, zeta_kappa: float = 5.0, x_kappa: float = 0.01) -> SimulationModel:
    return SimulationModel("cc", m_cc, WrappedLaplace(lambda_eps), zeta_kappa, x_kappa)


def simulate_dataset(model: SimulationModel, n: int, rng, return_x: bool = False):
    """Draw ``n`` observations from ``model``.

    Returns
    -------
    CircularDataset or LinearDataset
        Also the latent covariates when ``return_x`` is set.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if model.circular:
        x = sample_von_mises(0.0, model.x_kappa, rng, size=n)
    else:
        x = sample_uniform01(rng, size=n)
    zeta = sample_von_mises(0.0, model.zeta_kappa, rng, size=n)
    theta = wrap(model.regression(x) + zeta)
    if model.circular:
        eps = _sample_circular_noise(model.noise, rng, n)
        data = CircularDataset(theta, wrap(x + eps))
    else:
        eps = _sample_linear_noise(model.noise, rng, n)
        data = LinearDataset(theta, x + eps)
    return (data, x) if return_x else data


def _sample_circular_noise(noise, rng, n):
    if isinstance(noise, WrappedLaplace):
        return sample_wrapped_laplace(noise.lam, rng, size=n)
    if hasattr(noise, "lam"):
        raise TypeError(f"cannot sample from {noise!r}")
    return np.zeros(n)


def _sample_linear_noise(noise, rng, n):
    from .noise import Gaussian, LinearNoNoise
    from .samplers import sample_gaussian

    if isinstance(noise, Laplace):
        return sample_laplace(noise.sigma, rng, size=n)
    if isinstance(noise, Gaussian):
        return sample_gaussian(noise.sigma, rng, size=n)
    if isinstance(noise, LinearNoNoise):
        return np.zeros(n)
    raise TypeError(f"cannot sample from {noise!r}")


@dataclass
class RiskReport:
    """Monte Carlo summary of ``d_c(m_hat(x), m(x))``."""

    mean_error: float
    std_error: float
    replications: int
    failures: int
    seed: int
    errors: list
    reliability: float
    config: dict = field(default_factory=dict)
    selected: list = field(default_factory=list)
    version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["replication", "error", "selected_1", "selected_2"])
        for r, (e, sel) in enumerate(zip(self.errors, self.selected)):
            w.writerow([r, _fmt(e), _fmt(sel[0]), _fmt(sel[1])])
        return buf.getvalue()


def _fmt(v):
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def _estimator_for(model_or_data):
    circ = model_or_data.circular if isinstance(model_or_data, SimulationModel) else isinstance(model_or_data, CircularDataset)
    return estimate_m_circular if circ else estimate_m_linear


def _one_replication(args):
    model, n, x, configs, seed, r = args
    rng = make_rng(seed, r)
    data = simulate_dataset(model, n, rng)
    truth = float(model.regression(x))
    estimator = _estimator_for(model)
    out = []
    for cfg in configs:
        try:
            m_hat, diag = estimator(data, model.noise, x, cfg)
        except UndefinedDirectionError:
            out.append((math.nan, (None, None)))
            continue
        out.append((float(circ_dist(m_hat, truth)), tuple(float(s) for s in diag.selected)))
    return out


def _run_replications(model, n, x, configs, reps, seed, threads):
    jobs = [(model, n, x, configs, seed, r) for r in range(reps)]
    if threads and threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_one_replication, jobs))
    else:
        results = [_one_replication(j) for j in jobs]
    # results is in replication order regardless of scheduling
    return results


def _summarise(errs, sels, reps, seed, reliability, config):
    errs = np.asarray(errs, dtype=float)
    ok = ~np.isnan(errs)
    failures = int((~ok).sum())
    if failures > MAX_FAILURE_FRACTION * reps:
        raise ReplicationFailureError(f"{failures} of {reps} replications produced no direction")
    good = errs[ok]
    mean = float(np.mean(good))
    se = float(np.std(good, ddof=1) / math.sqrt(good.size)) if good.size > 1 else math.nan
    return RiskReport(mean, se, reps, failures, seed, [float(e) for e in errs],
                      reliability, config, [list(s) for s in sels])


def run_monte_carlo(model: SimulationModel, n: int, x: float, reps: int,
                    config: EstimatorConfig = None, seed: int = 0, threads: int = 1) -> RiskReport:
    """Mean cosine error of the estimator at ``x`` over ``reps`` seeded replications.

    Replication ``r`` uses stream ``r`` of ``seed``. Replications where both
    components vanish are excluded and counted; more than 5% of them is an
    error.
    """
    if reps < 1:
        raise ValueError("reps must be at least 1")
    config = config or EstimatorConfig()
    results = _run_replications(model, n, x, [config], reps, seed, threads)
    errs = [res[0][0] for res in results]
    sels = [res[0][1] for res in results]
    echo = {"model": model.describe(), "n": n, "x": x, "estimator": asdict(config)}
    return _summarise(errs, sels, reps, seed, reliability_ratio(model), echo)


@dataclass
class CalibrationCurve:
    grid: list
    risks: list
    std_errors: list
    plateau_mask: list
    plateau_start: Optional[int]
    criterion: dict
    config: dict = field(default_factory=dict)
    version: str = __version__

    def plateau_contains(self, c0: float) -> bool:
        idx = [i for i, g in enumerate(self.grid) if math.isclose(g, c0)]
        return bool(idx) and bool(self.plateau_mask[idx[0]])

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["c0", "risk", "std_error", "plateau"])
        for g, r, s, p in zip(self.grid, self.risks, self.std_errors, self.plateau_mask):
            w.writerow([repr(float(g)), repr(float(r)), _fmt(s), int(p)])
        return buf.getvalue()


def detect_plateau(risks, window: int = 3, tol: float = 0.2):
    """Flag grid points covered by a flat window.

    A window of ``window`` consecutive risks is flat when
    ``(max - min) / min <= tol``. Returns the boolean mask of covered points
    and the index of the first one (``None`` if no window is flat).
    """
    r = np.asarray(risks, dtype=float)
    mask = np.zeros(r.size, dtype=bool)
    w = min(window, r.size)
    for end in range(w - 1, r.size):
        seg = r[end - w + 1 : end + 1]
        lo = seg.min()
        flat = (seg.max() - lo) <= tol * lo if lo > 0 else np.all(seg == 0)
        if flat:
            mask[end - w + 1 : end + 1] = True
    start = int(np.argmax(mask)) if mask.any() else None
    return mask, start


def calibrate_c0(model: SimulationModel, n: int, x: float, grid=None, reps: int = 50,
                 seed: int = 0, threads: int = 1, window: int = 3, tol: float = 0.2,
                 base_config: EstimatorConfig = None) -> CalibrationCurve:
    """Risk as a function of the (shared) tuning constant, with common random numbers."""
    if grid is None:
        grid = GRID_CIRCULAR if model.circular else GRID_LINEAR
    grid = [float(g) for g in grid]
    if not grid:
        raise ValueError("empty tuning grid")
    base = base_config or EstimatorConfig()
    configs = [EstimatorConfig(c0=g, mode=base.mode, ss_params=base.ss_params, grid=base.grid) for g in grid]
    results = _run_replications(model, n, x, configs, reps, seed, threads)
    risks, ses = [], []
    for j in range(len(grid)):
        rep = _summarise([res[j][0] for res in results], [res[j][1] for res in results],
                         reps, seed, math.nan, {})
        risks.append(rep.mean_error)
        ses.append(rep.std_error)
    mask, start = detect_plateau(risks, window, tol)
    echo = {"model": model.describe(), "n": n, "x": x, "reps": reps, "seed": seed,
            "estimator": asdict(base)}
    return CalibrationCurve(grid, risks, ses, [bool(v) for v in mask], start,
                            {"window": window, "relative_variation": tol}, echo)


def bessel_ratio(kappa: float) -> float:
    """``I1(kappa) / I0(kappa)``, the mean resultant length of a von Mises law."""
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    return float(special.ive(1, kappa) / special.ive(0, kappa))


def reliability_ratio(model: SimulationModel) -> float:
    """``Var(X) / (Var(X) + Var(eps))`` with circular variances for the circular design."""
    if model.circular:
        var_x = 1.0 - bessel_ratio(model.x_kappa)
        var_e = model.noise.circular_variance()
    else:
        var_x = 1.0 / 12.0
        var_e = model.noise.variance()
    return var_x / (var_x + var_e)


def baseline_curves(x) -> dict:
    """Published parametric fits for the periwinkle data, evaluated at distance ``x``."""
    x = np.asarray(x, dtype=float)
    fl = wrap(1.693 + 2.0 * np.arctan(-0.0066 * (x - 47.65)))
    spml = atan2(0.157 + 0.049 * x, -1.228 + 0.03 * x)
    trig = atan2(1.0 + 0.021 * x, -1.49 + 0.029 * x)
    return {"FL": fl, "SPML": spml, "trig": trig}


def read_curve_csv(source) -> LinearDataset:
    """Parse ``distance,direction_radians`` CSV text or a path into a dataset.

    Raises
    ------
    ValueError
        With the offending line number on malformed input.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, newline="") as fh:
            text = fh.read()
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows:
        raise ValueError("line 1: empty file")
    header = [h.strip().lower() for h in rows[0]]
    if header != ["distance", "direction_radians"]:
        raise ValueError(f"line 1: expected header 'distance,direction_radians', got {rows[0]!r}")
    dist, direc = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise ValueError(f"line {lineno}: expected 2 fields, got {len(row)}")
        try:
            d, a = float(row[0]), float(row[1])
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric value") from None
        if not (math.isfinite(d) and math.isfinite(a)):
            raise ValueError(f"line {lineno}: non-finite value")
        dist.append(d)
        direc.append(a)
    if not dist:
        raise ValueError("no data rows")
    return LinearDataset(np.array(direc), np.array(dist))


def estimate_curve(data, noise, x_grid, config: EstimatorConfig = None) -> list:
    """Estimate the regression angle on a grid; failed points give ``nan``.

    Returns
    -------
    list of dict
        Keys ``x``, ``m_hat``, ``selected_1``, ``selected_2``.
    """
    x_grid = np.atleast_1d(np.asarray(x_grid, dtype=float))
    if x_grid.size == 0:
        raise ValueError("empty evaluation grid")
    estimator = _estimator_for(data)
    if estimator is estimate_m_linear and np.any((x_grid < 0) | (x_grid > 1)):
        warnings.warn("evaluation grid extends outside [0, 1]", stacklevel=2)
    records = []
    for x in x_grid:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", UserWarning)
                m_hat, diag = estimator(data, noise, float(x), config)
            sel = diag.selected
        except UndefinedDirectionError:
            m_hat, sel = math.nan, (math.nan, math.nan)
        records.append({"x": float(x), "m_hat": float(m_hat),
                        "selected_1": float(sel[0]), "selected_2": float(sel[1])})
    return records
