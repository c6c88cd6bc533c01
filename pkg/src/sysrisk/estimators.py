"""Empirical tail frequency, order-statistic VaR, and SES/MES estimators.

Order statistics are 1-based: ``empirical_quantile(x, q)`` is the
floor(N q)-th smallest sample.  SES/MES condition on the strict exceedance
D_i > D^{(floor(Nq))}; ties with the order statistic are excluded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, UndefinedEstimateError

DEFAULT_BOOTSTRAP = 200


@dataclass(frozen=True)
class EmpiricalEstimate:
    value: float
    std_error: Optional[float] = None
    n_exceed: int = 0


def order_index(n: int, q: float) -> int:
    """floor(n q) with q read as the decimal it was written as (0.6 * 5 is 3, not 2)."""
    if not 0 < q < 1:
        raise DomainError(f"q must lie in (0, 1), got {q}")
    k = math.floor(n * Fraction(repr(float(q))))
    if k < 1:
        raise DomainError(f"floor(N q) = 0 for N = {n}, q = {q}; no order statistic to use")
    return k


def _as_samples(samples) -> np.ndarray:
    arr = np.asarray(samples, dtype=float).ravel()
    if arr.size == 0:
        raise DomainError("samples must be nonempty")
    return arr


def empirical_tail(samples, x: float) -> EmpiricalEstimate:
    """Fraction of samples strictly above x, with its binomial standard error."""
    arr = _as_samples(samples)
    hits = int(np.count_nonzero(arr > x))
    p = hits / arr.size
    return EmpiricalEstimate(p, math.sqrt(p * (1 - p) / arr.size), hits)


def empirical_quantile(samples, q: float) -> float:
    arr = _as_samples(samples)
    k = order_index(arr.size, q)
    return float(np.partition(arr, k - 1)[k - 1])


def _aligned(z, d):
    z = _as_samples(z)
    d = _as_samples(d)
    if z.size != d.size:
        raise DomainError(f"z and d must be aligned, got sizes {z.size} and {d.size}")
    return z, d


def _systemic_point(z: np.ndarray, d: np.ndarray, k: int):
    """(SES, MES, exceedance count) for a single sample."""
    d_thr = np.partition(d, k - 1)[k - 1]
    z_thr = np.partition(z, k - 1)[k - 1]
    hit = d > d_thr
    n_exceed = int(np.count_nonzero(hit))
    if n_exceed == 0:
        return math.nan, math.nan, 0
    zh = z[hit]
    return float(np.maximum(zh - z_thr, 0.0).sum() / n_exceed), float(zh.sum() / n_exceed), n_exceed


def _bootstrap_se(z, d, k, n_boot, rng, which):
    n = z.size
    values = []
    for _ in range(n_boot):
        idx = rng.integers(0, n, n)
        ses, mes, hits = _systemic_point(z[idx], d[idx], k)
        if hits:
            values.append(ses if which == "ses" else mes)
    if len(values) < 2:
        return None
    return float(np.std(values, ddof=1))


def _systemic(z, d, q, n_boot, rng, which) -> EmpiricalEstimate:
    z, d = _aligned(z, d)
    k = order_index(z.size, q)
    ses, mes, hits = _systemic_point(z, d, k)
    if hits == 0:
        raise UndefinedEstimateError(f"no sample has D strictly above its order statistic at q = {q}")
    se = None
    if n_boot:
        rng = rng if rng is not None else np.random.default_rng(0)
        se = _bootstrap_se(z, d, k, n_boot, rng, which)
    return EmpiricalEstimate(ses if which == "ses" else mes, se, hits)


def empirical_ses(z_samples, d_samples, q: float, n_boot: int = DEFAULT_BOOTSTRAP,
                  rng=None) -> EmpiricalEstimate:
    """sum (Z_i - Z^{(k)})^+ 1{D_i > D^{(k)}} / sum 1{D_i > D^{(k)}}, k = floor(N q)."""
    return _systemic(z_samples, d_samples, q, n_boot, rng, "ses")


def empirical_mes(z_samples, d_samples, q: float, n_boot: int = DEFAULT_BOOTSTRAP,
                  rng=None) -> EmpiricalEstimate:
    """sum Z_i 1{D_i > D^{(k)}} / sum 1{D_i > D^{(k)}}, k = floor(N q)."""
    return _systemic(z_samples, d_samples, q, n_boot, rng, "mes")


@dataclass(frozen=True)
class SystemicTable:
    """SES/MES point estimates and bootstrap errors on a q grid, one row per line."""

    qs: np.ndarray
    ses: np.ndarray      # (d, len(qs))
    mes: np.ndarray
    ses_se: np.ndarray
    mes_se: np.ndarray
    n_exceed: np.ndarray  # (len(qs),)


def _grid_point(z: np.ndarray, d: np.ndarray, ks: np.ndarray):
    """SES and MES for every line and every order index, sharing one partial sort of d."""
    n, n_lines = z.shape
    k_min = int(ks.min())
    top = np.argpartition(d, k_min - 1)[k_min - 1:]
    top = top[np.argsort(d[top], kind="stable")]
    d_top = d[top]
    z_top = z[top]
    z_thr = np.partition(z, ks - 1, axis=0)[ks - 1]  # (len(ks), n_lines)
    ses = np.full((n_lines, ks.size), np.nan)
    mes = np.full((n_lines, ks.size), np.nan)
    hits = np.zeros(ks.size, dtype=np.int64)
    for j, k in enumerate(ks):
        start = int(np.searchsorted(d_top, d_top[k - k_min], side="right"))
        block = z_top[start:]
        hits[j] = block.shape[0]
        if hits[j]:
            mes[:, j] = block.sum(axis=0) / hits[j]
            ses[:, j] = np.maximum(block - z_thr[j], 0.0).sum(axis=0) / hits[j]
    return ses, mes, hits


def systemic_table(z, d, qs: Sequence[float], n_boot: int = DEFAULT_BOOTSTRAP,
                   seed: int = 0) -> SystemicTable:
    """Vectorised empirical SES/MES over a q grid with nonparametric bootstrap errors.

    ``z`` is the (N, d) matrix of per-line losses, ``d`` the aligned totals.
    Point values equal :func:`empirical_ses` / :func:`empirical_mes` exactly.
    """
    z = np.asarray(z, dtype=float)
    if z.ndim == 1:
        z = z[:, None]
    d = _as_samples(d)
    if z.shape[0] != d.size:
        raise DomainError("z rows and d must be aligned")
    qs = np.asarray(qs, dtype=float)
    ks = np.array([order_index(d.size, q) for q in qs])
    ses, mes, hits = _grid_point(z, d, ks)
    if np.any(hits == 0):
        raise UndefinedEstimateError("a q in the grid has no strict exceedance of D")

    rng = np.random.default_rng(seed)
    boot_ses = np.full((n_boot,) + ses.shape, np.nan)
    boot_mes = np.full((n_boot,) + mes.shape, np.nan)
    for b in range(n_boot):
        idx = rng.integers(0, d.size, d.size)
        boot_ses[b], boot_mes[b], _ = _grid_point(z[idx], d[idx], ks)
    if n_boot >= 2:
        ses_se = np.nanstd(boot_ses, axis=0, ddof=1)
        mes_se = np.nanstd(boot_mes, axis=0, ddof=1)
    else:
        ses_se = np.full(ses.shape, np.nan)
        mes_se = np.full(mes.shape, np.nan)
    return SystemicTable(qs, ses, mes, ses_se, mes_se, hits)
