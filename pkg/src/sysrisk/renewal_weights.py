"""Discounted exposure integrals and the per-line weights l_k(t).

For a homogeneous Poisson stream the mean-count measure has no atom at 0, so
the left-closed lower limit adds nothing and the integral is
lambda * (1 - e^{phi t}) / (-phi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from .config import LineSpec, ModelConfig, TailSpec, phi_alpha
from .errors import DomainError
from .heavy_tails import equivalence_ratio


@dataclass(frozen=True)
class PoissonIntensity:
    lam: float

    def __post_init__(self):
        if self.lam < 0:
            raise DomainError(f"intensity must be nonnegative, got {self.lam}")


@dataclass(frozen=True)
class TabulatedRenewal:
    """Renewal function given as (time, cumulative mean count) points starting at (0, 0)."""

    grid: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        pts = np.asarray(self.grid, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise DomainError("grid needs at least two (time, mean count) pairs")
        if pts[0, 0] != 0 or pts[0, 1] != 0:
            raise DomainError("grid must start at (0, 0)")
        if np.any(np.diff(pts[:, 0]) < 0) or np.any(np.diff(pts[:, 1]) < 0):
            raise DomainError("grid must be nondecreasing in time and in count")


ArrivalLaw = Union[PoissonIntensity, TabulatedRenewal]


def exposure_integral(arrival: ArrivalLaw, phi: float, t: float) -> float:
    """int_{0-}^t e^{s phi} d(mean count)_s."""
    if t < 0:
        raise DomainError(f"horizon must be nonnegative, got {t}")
    if isinstance(arrival, PoissonIntensity):
        if phi * t == 0:
            return arrival.lam * t
        return arrival.lam * math.expm1(phi * t) / phi
    pts = np.asarray(arrival.grid, dtype=float)
    times, counts = pts[:, 0], pts[:, 1]
    if t == 0:
        # only a possible atom at the origin contributes
        return float(counts[times == 0].max())
    inside = times < t
    s = np.append(times[inside], t)
    m = np.append(counts[inside], np.interp(t, times, counts))
    w = np.exp(phi * s)
    return float(np.sum(0.5 * (w[1:] + w[:-1]) * np.diff(m)))


def line_weight(line: LineSpec, reference: TailSpec, phi: float, t: float) -> float:
    """l_k(t) = a_k * int e^{s phi} d lambda_s + b_k * int e^{s phi} d xi_s."""
    a = equivalence_ratio(line.x_claims, reference)
    b = equivalence_ratio(line.y_claims, reference)
    return (a * exposure_integral(PoissonIntensity(line.x_intensity), phi, t)
            + b * exposure_integral(PoissonIntensity(line.y_intensity), phi, t))


@dataclass(frozen=True)
class Weights:
    per_line: np.ndarray
    total: float

    @property
    def shares(self) -> np.ndarray:
        return self.per_line / self.total


def total_weight(config: ModelConfig, t: float) -> Weights:
    phi = phi_alpha(config)
    per_line = np.array([line_weight(line, config.reference, phi, t) for line in config.lines])
    return Weights(per_line, float(per_line.sum()))
