"""Frank copula sampling through the Marshall-Olkin frailty construction.

With generator inverse psi(s) = -log(1 - (1 - e^{-theta}) e^{-s}) / theta and a
logarithmic-series frailty V with parameter 1 - e^{-theta}, the vector
psi(E_i / V) for i.i.d. standard exponentials E_i has the d-dimensional Frank
copula as its law, for any d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class FrankCopula:
    theta: float
    dim: int

    def __post_init__(self):
        if not self.theta > 0:
            raise DomainError(f"Frank copula needs theta > 0 for arbitrary dimension, got {self.theta}")
        if self.dim < 1:
            raise DomainError(f"dimension must be positive, got {self.dim}")

    @property
    def frailty_p(self) -> float:
        return -math.expm1(-self.theta)


def sample_logarithmic(p: float, rng) -> int:
    """Draw from P(V = n) = -p^n / (n log(1 - p)), n >= 1 (Kemp's LK algorithm).

    Uses the mixture representation: given q = 1 - (1 - p)^W with W uniform,
    V is geometric on {1, 2, ...} with P(V > n | q) = q^n.
    """
    if not 0 < p < 1:
        raise DomainError(f"logarithmic parameter must lie in (0, 1), got {p}")
    u = rng.random()
    if u > p:
        return 1
    w = rng.random()
    q = -math.expm1(w * math.log1p(-p))
    if u > q:
        return 1
    if u > q * q:
        return 2
    return 1 + int(math.log(u) / math.log(q))


def _frailty_scaled_exponentials(copula: FrankCopula, rng) -> np.ndarray:
    v = sample_logarithmic(copula.frailty_p, rng)
    return rng.standard_exponential(copula.dim) / v


def _psi(theta: float, s: np.ndarray) -> np.ndarray:
    return -np.log1p(-(-math.expm1(-theta)) * np.exp(-s)) / theta


def _psi_complement(theta: float, s: np.ndarray) -> np.ndarray:
    # 1 - psi(s) = log1p(-expm1(theta) * expm1(-s)) / theta, no cancellation as s -> 0
    return np.log1p(-math.expm1(theta) * np.expm1(-s)) / theta


def sample_uniforms(copula: FrankCopula, rng) -> np.ndarray:
    """One draw of ``copula.dim`` Frank-coupled uniforms, each strictly inside (0, 1)."""
    u = _psi(copula.theta, _frailty_scaled_exponentials(copula, rng))
    tiny = np.finfo(float).tiny
    return np.clip(u, tiny, np.nextafter(1.0, 0.0))


def sample_survival_uniforms(copula: FrankCopula, rng) -> np.ndarray:
    """1 - sample_uniforms(copula, rng) for the same random stream, computed directly.

    Feeding these to a quantile-from-tail map keeps full relative precision for
    the largest claims, where 1 - U is far below machine epsilon.
    """
    s = _psi_complement(copula.theta, _frailty_scaled_exponentials(copula, rng))
    return np.clip(s, np.finfo(float).tiny, np.nextafter(1.0, 0.0))


def frank_cdf(theta: float, u, v):
    """Bivariate Frank copula C(u, v)."""
    num = np.expm1(-theta * np.asarray(u)) * np.expm1(-theta * np.asarray(v))
    return -np.log1p(num / math.expm1(-theta)) / theta
