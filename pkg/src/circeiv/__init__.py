"""Adaptive nonparametric circular regression with errors in the covariates."""

__version__ = "0.1.0"

from .circ_core import atan2, circ_dist, wrap
from .circular import CircularDataset, estimate_m_circular
from .exceptions import (
    ConfigurationError,
    IllPosedWeightError,
    ReplicationFailureError,
    UndefinedDirectionError,
)
from .linear import LinearDataset, estimate_m_linear
from .noise import Gaussian, Laplace, WrappedLaplace, parse_noise
from .selection import EstimatorConfig
