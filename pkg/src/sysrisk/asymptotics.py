"""Closed-form tail, VaR, SES and MES approximations for the renewal model.

All line indices are 0-based.  ``tail_asymptotic`` approximates both P(S_t > x)
and P(D_t > x); for the net loss D_t the approximation is uniform only over
horizons bounded away from 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import ModelConfig, phi_alpha
from .errors import DomainError, HypothesisError
from .heavy_tails import quantile, tail
from .renewal_weights import PoissonIntensity, Weights, exposure_integral, total_weight

ALPHA_GUARD = 1e-9


def _check_t(t: float) -> None:
    if not t > 0:
        raise DomainError(f"horizon t must be positive, got {t}")


def _check_q(q: float) -> None:
    if not 0 < q < 1:
        raise DomainError(f"q must lie in (0, 1), got {q}")


def _check_alpha(alpha: float) -> None:
    if alpha <= 1 + ALPHA_GUARD:
        raise HypothesisError(f"alpha must exceed 1 for SES/MES, got {alpha}")


def tail_asymptotic(config: ModelConfig, x: float, t: float) -> float:
    """sum_k [F_k(x) int e^{s phi(alpha)} d lambda^k_s + G_k(x) int e^{s phi(alpha)} d xi^k_s]."""
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    _check_t(t)
    phi = phi_alpha(config)
    return float(sum(
        tail(spec, x) * exposure_integral(PoissonIntensity(lam), phi, t)
        for _, spec, lam in config.streams()
    ))


def _log_scale(weights: Weights, config: ModelConfig, q: float) -> float:
    # log of (sum l)^{1/alpha} * F^{<-}(q)
    return math.log(weights.total) / config.alpha + math.log(quantile(config.reference, q))


def var_asymptotic(config: ModelConfig, q: float, t: float) -> float:
    """(sum_i l_i(t))^{1/alpha} * F^{<-}(q)."""
    _check_q(q)
    _check_t(t)
    return math.exp(_log_scale(total_weight(config, t), config, q))


def line_tail_asymptotic(config: ModelConfig, k: int, x: float, t: float) -> float:
    """l_k(t) * F(x), the approximation of P(Z^k_t > x)."""
    if not 0 <= k < config.d:
        raise DomainError(f"line index {k} out of range for d = {config.d}")
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    _check_t(t)
    return float(total_weight(config, t).per_line[k] * tail(config.reference, x))


def h_ses(rho: float, alpha: float) -> float:
    return rho * (1.0 - rho ** (1.0 / alpha) + 1.0 / (alpha - 1.0))


def h_mes(rho: float, alpha: float) -> float:
    return alpha * rho / (alpha - 1.0)


def _systemic_args(config, k, q, t):
    if not 0 <= k < config.d:
        raise DomainError(f"line index {k} out of range for d = {config.d}")
    _check_alpha(config.alpha)
    _check_q(q)
    _check_t(t)
    return total_weight(config, t)


def ses_asymptotic(config: ModelConfig, k: int, q: float, t: float,
                   weights: Optional[Weights] = None) -> float:
    """(l_k / L) * (L^{1/a} - l_k^{1/a} + L^{1/a} / (a - 1)) * F^{<-}(q), L = sum_i l_i."""
    w = weights if weights is not None else _systemic_args(config, k, q, t)
    a = config.alpha
    lk, total = w.per_line[k], w.total
    if lk == 0:
        return 0.0
    root_total = math.exp(math.log(total) / a)
    root_k = math.exp(math.log(lk) / a)
    return float(lk / total * (root_total - root_k + root_total / (a - 1)) * quantile(config.reference, q))


def mes_asymptotic(config: ModelConfig, k: int, q: float, t: float,
                   weights: Optional[Weights] = None) -> float:
    """a / (a - 1) * l_k / L^{1 - 1/a} * F^{<-}(q)."""
    w = weights if weights is not None else _systemic_args(config, k, q, t)
    a = config.alpha
    lk, total = w.per_line[k], w.total
    return float(a / (a - 1) * lk * math.exp(-(1 - 1 / a) * math.log(total)) * quantile(config.reference, q))


@dataclass(frozen=True)
class AsymptoticReport:
    x: float
    q: float
    t: float
    tail_at_x: float
    var_q: float
    ses: np.ndarray
    mes: np.ndarray
    weights: Weights

    @property
    def shares(self) -> np.ndarray:
        return self.weights.shares


def report(config: ModelConfig, x: float, q: float, t: float) -> AsymptoticReport:
    w = _systemic_args(config, 0, q, t)
    return AsymptoticReport(
        x=x, q=q, t=t,
        tail_at_x=tail_asymptotic(config, x, t),
        var_q=var_asymptotic(config, q, t),
        ses=np.array([ses_asymptotic(config, k, q, t, w) for k in range(config.d)]),
        mes=np.array([mes_asymptotic(config, k, q, t, w) for k in range(config.d)]),
        weights=w,
    )
