"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class HypothesisError(ValueError):
    """A model hypothesis required by an asymptotic formula does not hold."""


class UndefinedEstimateError(ValueError):
    """An empirical estimator has nothing to average over (zero exceedances)."""
