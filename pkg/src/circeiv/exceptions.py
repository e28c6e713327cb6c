"""Exception types raised by the estimators and the experiment harness."""


class UndefinedDirectionError(ValueError):
    """Both components of a direction vector are zero, so no angle exists."""


class IllPosedWeightError(ValueError):
    """The noise characteristic function vanishes where it must be inverted."""


class ConfigurationError(ValueError):
    """Estimator or experiment settings that cannot be used (e.g. empty grid)."""


class ReplicationFailureError(RuntimeError):
    """Too many Monte Carlo replications failed to produce an estimate."""
