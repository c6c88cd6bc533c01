"""Levy discount factors e^{-R_t}.

Two concrete Levy processes are supported: a pure linear drift R_t = delta*t
and a Brownian motion with drift R_t = mu*t + sigma*W_t.  Within one simulated
replication, claim discounts and the premium integral must come from a single
path; :func:`sample_path` builds that path and :class:`DiscountPath` carries it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class LinearDrift:
    """R_t = delta * t."""

    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise DomainError(f"LinearDrift needs delta > 0 (E[R_1] > 0), got {self.delta}")


@dataclass(frozen=True)
class BrownianDrift:
    """R_t = mu * t + sigma * W_t."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not self.mu > 0:
            raise DomainError(f"BrownianDrift needs mu > 0 (E[R_1] > 0), got {self.mu}")
        if self.sigma < 0:
            raise DomainError(f"BrownianDrift needs sigma >= 0, got {self.sigma}")


LevyModel = Union[LinearDrift, BrownianDrift]


def laplace_exponent(model: LevyModel, a: float) -> float:
    """log E[exp(-a R_1)]."""
    if isinstance(model, LinearDrift):
        return -a * model.delta
    return -a * model.mu + 0.5 * a * a * model.sigma ** 2


def find_alpha_star(model: LevyModel, alpha: float) -> Optional[float]:
    """Return a witness a* > alpha with laplace_exponent(a*) < 0, or None.

    For a Brownian drift the exponent is negative exactly on (0, 2*mu/sigma^2),
    so the midpoint between ``alpha`` and that root is returned, capped at
    ``alpha + 1`` to keep the witness finite for tiny sigma.
    """
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if isinstance(model, LinearDrift) or model.sigma == 0:
        return alpha + 1.0
    root = 2.0 * model.mu / model.sigma / model.sigma  # sigma**2 may underflow
    if math.isinf(root):
        return alpha + 1.0
    if alpha < root:
        return min(0.5 * (alpha + root), alpha + 1.0)
    return None


def _check_sorted(times: np.ndarray) -> None:
    if times.size and (times[0] < 0 or np.any(np.diff(times) < 0)):
        raise DomainError("times must be sorted ascending and nonnegative")


def discount_factors_at(model: LevyModel, times: Sequence[float], rng=None) -> np.ndarray:
    """Sample e^{-R_s} at the given sorted times along one path."""
    times = np.asarray(times, dtype=float)
    _check_sorted(times)
    if isinstance(model, LinearDrift):
        return np.exp(-model.delta * times)
    if model.sigma == 0:
        return np.exp(-model.mu * times)
    gaps = np.diff(times, prepend=0.0)
    incr = model.mu * gaps
    if model.sigma > 0:
        incr = incr + model.sigma * np.sqrt(gaps) * rng.standard_normal(times.size)
    return np.exp(-np.cumsum(incr))


def _linear_premium_integral(delta: float, t: float) -> float:
    # (1 - e^{-delta t}) / delta, stable as delta -> 0
    if delta * t == 0:
        return t
    return -math.expm1(-delta * t) / delta


@dataclass(frozen=True)
class DiscountPath:
    """One realisation of R on a grid that contains every claim time.

    ``grid`` is sorted and starts at 0; ``r`` holds R at the grid points;
    ``claim_index`` maps each requested claim time to its grid position.
    """

    grid: np.ndarray
    r: np.ndarray
    claim_index: np.ndarray

    @property
    def claim_factors(self) -> np.ndarray:
        return np.exp(-self.r[self.claim_index])

    def integral(self) -> float:
        """int_0^t e^{-R_s} ds with R linear between grid points.

        Each cell is integrated exactly under linear interpolation of R, which
        reproduces the closed form when sigma = 0 and has O(h^2) bias otherwise.
        """
        dt = np.diff(self.grid)
        dr = np.diff(self.r)
        left = np.exp(-self.r[:-1])
        # (1 - e^{-dr}) / dr -> 1 as dr -> 0
        small = np.abs(dr) < 1e-12
        safe = np.where(small, 1.0, dr)
        factor = np.where(small, 1.0 - 0.5 * dr, -np.expm1(-safe) / safe)
        return float(np.sum(dt * left * factor))


def sample_path(model: LevyModel, t: float, times: Sequence[float], rng=None,
                step: Optional[float] = None) -> DiscountPath:
    """Sample R on the merge of a regular grid (step ``step``, default t/1000) and ``times``.

    Gaussian increments over consecutive gaps of the merged grid give the exact
    joint law of R at every grid point.
    """
    times = np.asarray(times, dtype=float)
    _check_sorted(times)
    if t < 0:
        raise DomainError(f"horizon must be nonnegative, got {t}")
    if isinstance(model, LinearDrift):
        grid = np.concatenate(([0.0], times, [t])) if t > 0 else np.zeros(1)
        grid = np.unique(grid)
        return DiscountPath(grid, model.delta * grid, np.searchsorted(grid, times))
    if step is None:
        step = t / 1000 if t > 0 else 1.0
    n_cells = max(1, math.ceil(t / step)) if t > 0 else 0
    grid = np.unique(np.concatenate((np.linspace(0.0, t, n_cells + 1), times)))
    if model.sigma == 0:
        return DiscountPath(grid, model.mu * grid, np.searchsorted(grid, times))
    gaps = np.diff(grid)
    incr = model.mu * gaps + model.sigma * np.sqrt(gaps) * rng.standard_normal(gaps.size)
    r = np.concatenate(([0.0], np.cumsum(incr)))
    return DiscountPath(grid, r, np.searchsorted(grid, times))


def premium_discount_integral(model: LevyModel, t: float, path: Optional[DiscountPath] = None) -> float:
    """int_0^t e^{-R_s} ds.

    Closed form for a linear drift.  A Brownian drift needs the replication's
    sampled ``path`` so the integral is coherent with the claim discounts.
    """
    if t < 0:
        raise DomainError(f"horizon must be nonnegative, got {t}")
    if isinstance(model, LinearDrift):
        return _linear_premium_integral(model.delta, t)
    if path is None:
        raise DomainError("a Brownian premium integral needs the replication's sampled path")
    return path.integral()
