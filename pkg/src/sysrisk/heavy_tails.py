"""Pareto tail, quantile and tail-equivalence ratios, all in log domain."""

from __future__ import annotations

import math

import numpy as np

from .config import TailSpec
from .errors import DomainError, HypothesisError


def tail(spec: TailSpec, x):
    """Survival function (gamma / (gamma + x)) ** alpha.  Accepts scalars or arrays."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0) or np.any(np.isnan(x_arr)):
        raise DomainError("tail is defined for x >= 0")
    out = np.exp(-spec.alpha * np.log1p(x_arr / spec.gamma))
    return float(out) if out.ndim == 0 else out


def quantile(spec: TailSpec, q):
    """Inverse of the distribution function: gamma * ((1 - q) ** (-1/alpha) - 1)."""
    q_arr = np.asarray(q, dtype=float)
    if np.any(q_arr < 0) or np.any(q_arr >= 1) or np.any(np.isnan(q_arr)):
        raise DomainError("quantile needs 0 <= q < 1")
    out = spec.gamma * np.expm1(-np.log1p(-q_arr) / spec.alpha)
    return float(out) if out.ndim == 0 else out


def quantile_from_tail(spec: TailSpec, survival):
    """Same as quantile(spec, 1 - survival) but exact for survival near 0."""
    s = np.asarray(survival, dtype=float)
    out = spec.gamma * np.expm1(-np.log(s) / spec.alpha)
    return float(out) if out.ndim == 0 else out


def equivalence_ratio(spec: TailSpec, reference: TailSpec) -> float:
    """Limit of tail(spec, x) / tail(reference, x) as x grows: (gamma/gamma_ref) ** alpha."""
    if spec.alpha != reference.alpha:
        raise HypothesisError(
            f"tail indices differ ({spec.alpha} vs {reference.alpha}); tails are not equivalent"
        )
    return math.exp(spec.alpha * (math.log(spec.gamma) - math.log(reference.gamma)))
