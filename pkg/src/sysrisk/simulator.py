"""Monte Carlo replications of (Z^1_t, ..., Z^d_t, D_t, S_t).

Replication ``i`` of a batch draws from its own Philox stream keyed by the
batch seed with ``i`` in the top counter word, so every replication is a pure
function of (config, seed, i).  Results are written back by index, which makes
a batch bit-identical for any number of workers.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .config import ModelConfig, config_digest
from .dependence import FrankCopula, sample_survival_uniforms
from .discounting import LinearDrift, premium_discount_integral, sample_path
from .errors import DomainError

logger = logging.getLogger(__name__)


def replication_stream(seed: int, index: int) -> np.random.Generator:
    """Independent, platform-stable random stream for replication ``index``."""
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, index]))


@dataclass(frozen=True)
class Replication:
    z_per_line: np.ndarray
    d_total: float
    s_aggregate: float
    claim_count: int


class _Plan:
    """Per-config constants hoisted out of the replication loop."""

    def __init__(self, config: ModelConfig):
        streams = config.streams()
        self.config = config
        self.t = config.horizon_t
        self.means = np.array([lam for _, _, lam in streams]) * self.t
        self.line_of = np.array([k for k, _, _ in streams])
        self.specs = [spec for _, spec, _ in streams]
        self.gammas = np.array([s.gamma for s in self.specs])
        self.alphas = np.array([s.alpha for s in self.specs])
        self.premiums = np.array([line.premium_rate for line in config.lines])
        self.linear = isinstance(config.discount, LinearDrift)
        if self.linear:
            self.premium_integral = premium_discount_integral(config.discount, self.t)


def _replicate(plan: _Plan, rng) -> Replication:
    config = plan.config
    d = config.d
    counts = np.asarray(rng.poisson(plan.means), dtype=np.int64)
    n_claims = int(counts.sum())

    if n_claims:
        stream_id = np.repeat(np.arange(counts.size), counts)
        arrivals = rng.uniform(0.0, plan.t, n_claims)
        # canonical order: line, X before Y, ascending arrival time
        order = np.lexsort((arrivals, stream_id))
        arrivals = arrivals[order]
        survival = sample_survival_uniforms(FrankCopula(config.copula_theta, n_claims), rng)
        sizes = plan.gammas[stream_id] * np.expm1(-np.log(survival) / plan.alphas[stream_id])
        by_time = np.argsort(arrivals, kind="stable")
        path = sample_path(config.discount, plan.t, arrivals[by_time], rng)
        factors = np.empty(n_claims)
        factors[by_time] = path.claim_factors
        discounted = sizes * factors
        claims_per_line = np.bincount(plan.line_of[stream_id], weights=discounted, minlength=d)
    else:
        path = None if plan.linear else sample_path(config.discount, plan.t, [], rng)
        claims_per_line = np.zeros(d)

    if plan.linear:
        premium_integral = plan.premium_integral
    else:
        premium_integral = premium_discount_integral(config.discount, plan.t, path)

    z = claims_per_line - plan.premiums * premium_integral
    d_total = 0.0
    for value in z:
        d_total += value
    s_aggregate = 0.0
    for value in claims_per_line:
        s_aggregate += value
    return Replication(z, d_total, s_aggregate, n_claims)


def simulate_replication(config: ModelConfig, rng) -> Replication:
    """One draw of the per-line discounted losses, their total, and the aggregate claims."""
    return _replicate(_Plan(config), rng)


@dataclass(frozen=True)
class BatchResult:
    z: np.ndarray            # (n, d) per-line losses Z^k_t
    d_total: np.ndarray      # (n,) D_t
    s_aggregate: np.ndarray  # (n,) S_t
    claim_count: np.ndarray  # (n,)
    seed: int
    config_digest: str
    wall_time: float = field(default=0.0, compare=False)

    @property
    def n(self) -> int:
        return int(self.d_total.size)

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.seed}:{self.n}:{self.config_digest}".encode())
        for arr in (self.z, self.d_total, self.s_aggregate, self.claim_count):
            h.update(np.ascontiguousarray(arr).tobytes())
        return h.hexdigest()

    def save(self, path: Union[str, Path]) -> Path:
        """Write columns to ``path`` (.npz) and metadata to ``path`` + '.json'."""
        path = Path(path)
        if path.suffix != ".npz":
            path = path.with_suffix(path.suffix + ".npz") if path.suffix else path.with_suffix(".npz")
        np.savez(path, z=self.z, d_total=self.d_total, s_aggregate=self.s_aggregate,
                 claim_count=self.claim_count)
        meta = {
            "seed": self.seed,
            "n": self.n,
            "d": int(self.z.shape[1]),
            "config_digest": self.config_digest,
            "batch_digest": self.digest(),
            "wall_time": self.wall_time,
        }
        sidecar = path.with_name(path.name + ".json")
        sidecar.write_text(json.dumps(meta, indent=2) + "\n")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "BatchResult":
        path = Path(path)
        meta = json.loads(path.with_name(path.name + ".json").read_text())
        with np.load(path) as data:
            result = cls(data["z"], data["d_total"], data["s_aggregate"], data["claim_count"],
                         int(meta["seed"]), meta["config_digest"], float(meta.get("wall_time", 0.0)))
        if result.digest() != meta["batch_digest"]:
            raise ValueError(f"{path}: batch digest does not match its sidecar")
        return result


def _run_chunk(config: ModelConfig, seed: int, start: int, stop: int):
    plan = _Plan(config)
    n = stop - start
    z = np.empty((n, config.d))
    d_total = np.empty(n)
    s_agg = np.empty(n)
    counts = np.empty(n, dtype=np.int64)
    for j in range(n):
        rep = _replicate(plan, replication_stream(seed, start + j))
        z[j] = rep.z_per_line
        d_total[j] = rep.d_total
        s_agg[j] = rep.s_aggregate
        counts[j] = rep.claim_count
    return start, z, d_total, s_agg, counts


def default_workers() -> int:
    env = os.environ.get("SYSRISK_WORKERS")
    if env:
        return max(1, int(env))
    return 1


def run_batch(config: ModelConfig, n: int, seed: int, workers: Optional[int] = None,
              chunk_size: int = 20_000) -> BatchResult:
    """Simulate ``n`` independent replications; output does not depend on ``workers``."""
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    if seed < 0:
        raise DomainError(f"seed must be nonnegative, got {seed}")
    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise DomainError(f"workers must be positive, got {workers}")
    started = time.perf_counter()

    z = np.empty((n, config.d))
    d_total = np.empty(n)
    s_agg = np.empty(n)
    counts = np.empty(n, dtype=np.int64)
    bounds = [(lo, min(lo + chunk_size, n)) for lo in range(0, n, chunk_size)]

    def store(chunk):
        lo, cz, cd, cs, cc = chunk
        hi = lo + cd.size
        z[lo:hi], d_total[lo:hi], s_agg[lo:hi], counts[lo:hi] = cz, cd, cs, cc

    if workers == 1 or len(bounds) == 1:
        for lo, hi in bounds:
            store(_run_chunk(config, seed, lo, hi))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_chunk, config, seed, lo, hi) for lo, hi in bounds]
            for fut in futures:
                store(fut.result())

    elapsed = time.perf_counter() - started
    logger.info("simulated %d replications in %.1fs with %d worker(s)", n, elapsed, workers)
    return BatchResult(z, d_total, s_agg, counts, seed, config_digest(config), elapsed)
