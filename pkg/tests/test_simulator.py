import math

import numpy as np
import pytest

from sysrisk.config import LineSpec, ModelConfig, TailSpec
from sysrisk.discounting import BrownianDrift, LinearDrift
from sysrisk.heavy_tails import quantile
from sysrisk.simulator import BatchResult, replication_stream, run_batch, simulate_replication


def _silent(cfg):
    lines = tuple(LineSpec(l.x_claims, l.y_claims, 0.0, 0.0, l.premium_rate) for l in cfg.lines)
    return cfg.replace(lines=lines)


class StubRng:
    """Scripted stream: one line-1 X claim at t/2 whose survival value is exactly 0.01."""

    def __init__(self, theta):
        self.exp_value = -math.log1p(-math.expm1(0.01 * theta) / math.expm1(theta))

    def poisson(self, means):
        return np.array([1, 0, 0, 0])

    def uniform(self, low, high, size):
        return np.full(size, 0.5 * (low + high))

    def random(self):
        return 0.999999

    def standard_exponential(self, size):
        return np.full(size, self.exp_value)


def test_no_claims_gives_minus_premium(paper_cfg):
    rep = simulate_replication(_silent(paper_cfg), replication_stream(1, 0))
    np.testing.assert_allclose(rep.z_per_line, [-4.12100] * 2, atol=5e-6)
    assert rep.d_total == pytest.approx(-8.24200, abs=1e-5)
    assert rep.s_aggregate == 0.0 and rep.claim_count == 0


def test_vanishing_horizon(paper_cfg):
    rep = simulate_replication(paper_cfg.replace(horizon_t=1e-12), replication_stream(2, 0))
    assert np.all(np.abs(rep.z_per_line) < 1e-9)
    assert abs(rep.d_total) < 1e-9 and abs(rep.s_aggregate) < 1e-9


def test_scripted_single_claim(paper_cfg):
    rep = simulate_replication(paper_cfg, StubRng(paper_cfg.copula_theta))
    premium = 5 * (-math.expm1(-0.4) / 0.4)
    expected = quantile(TailSpec(2.0, 1.2), 0.99) * math.exp(-0.2) - premium
    assert rep.z_per_line[0] == pytest.approx(expected, rel=1e-10)
    assert expected == pytest.approx(70.246, abs=1e-3)
    assert rep.z_per_line[1] == pytest.approx(-premium, rel=1e-14)
    assert rep.s_aggregate == pytest.approx(quantile(TailSpec(2.0, 1.2), 0.99) * math.exp(-0.2), rel=1e-10)
    assert rep.claim_count == 1


def test_replication_invariants(paper_cfg):
    batch = run_batch(paper_cfg, 2000, seed=3)
    assert np.array_equal(batch.d_total, batch.z[:, 0] + batch.z[:, 1])
    assert np.all(batch.s_aggregate >= 0)
    assert np.all(np.isfinite(batch.z))
    premium = 5 * (-math.expm1(-0.4) / 0.4)
    assert np.all(batch.z >= -premium - 1e-12)
    np.testing.assert_allclose(batch.s_aggregate, batch.d_total + 2 * premium, rtol=1e-12, atol=1e-9)
    assert np.all(batch.s_aggregate[batch.claim_count == 0] == 0)


def test_single_replication_matches_batch(paper_cfg):
    batch = run_batch(paper_cfg, 1, seed=99)
    rep = simulate_replication(paper_cfg, replication_stream(99, 0))
    assert np.array_equal(batch.z[0], rep.z_per_line)
    assert batch.d_total[0] == rep.d_total


@pytest.mark.parametrize("workers", [2, 8])
def test_worker_count_does_not_change_batch(paper_cfg, workers):
    ref = run_batch(paper_cfg, 3000, seed=5, workers=1, chunk_size=500)
    other = run_batch(paper_cfg, 3000, seed=5, workers=workers, chunk_size=500)
    assert ref.digest() == other.digest()


def test_chunking_does_not_change_batch(paper_cfg):
    assert run_batch(paper_cfg, 1000, 5, chunk_size=1000).digest() == run_batch(paper_cfg, 1000, 5,
                                                                                   chunk_size=77).digest()


def test_seed_changes_batch(paper_cfg):
    assert run_batch(paper_cfg, 200, 1).digest() != run_batch(paper_cfg, 200, 2).digest()


def test_claim_count_mean(paper_cfg):
    batch = run_batch(paper_cfg, 20_000, seed=7)
    se = math.sqrt(2.3 / batch.n)
    assert abs(batch.claim_count.mean() - 2.3) < 3 * se


def test_light_tail_first_moment(paper_cfg):
    # alpha = 8 has finite variance, so the sample mean of S is well behaved
    def sc(s):
        return TailSpec(s.gamma, 8.0)
    lines = tuple(LineSpec(sc(l.x_claims), sc(l.y_claims), l.x_intensity, l.y_intensity, l.premium_rate)
                  for l in paper_cfg.lines)
    cfg = paper_cfg.replace(lines=lines)
    batch = run_batch(cfg, 20_000, seed=8)
    # E S = sum lambda * gamma/(alpha-1) * int_0^1 e^{-delta s} ds
    integral = -math.expm1(-0.4) / 0.4
    exact = sum(lam * s.gamma / 7.0 * integral for _, s, lam in cfg.streams())
    se = batch.s_aggregate.std(ddof=1) / math.sqrt(batch.n)
    assert abs(batch.s_aggregate.mean() - exact) < 4 * se


def test_brownian_config_runs(paper_cfg):
    cfg = paper_cfg.replace(discount=BrownianDrift(0.4, 0.3))
    batch = run_batch(cfg, 300, seed=4)
    assert np.all(np.isfinite(batch.z))
    assert np.allclose(batch.d_total, batch.z.sum(axis=1), rtol=1e-12, atol=1e-12)
    assert run_batch(cfg, 300, seed=4).digest() == batch.digest()


def test_degenerate_brownian_matches_linear(paper_cfg):
    brown = run_batch(paper_cfg.replace(discount=BrownianDrift(0.4, 0.0)), 200, seed=6)
    linear = run_batch(paper_cfg, 200, seed=6)
    np.testing.assert_allclose(brown.z, linear.z, rtol=1e-9, atol=1e-9)


def test_save_load_round_trip(tmp_path, paper_cfg):
    batch = run_batch(paper_cfg, 500, seed=10)
    written = batch.save(tmp_path / "b")
    assert written.name == "b.npz"
    loaded = BatchResult.load(written)
    assert loaded.digest() == batch.digest()
    assert loaded.seed == 10 and loaded.config_digest == batch.config_digest


def test_tampered_batch_rejected(tmp_path, paper_cfg):
    batch = run_batch(paper_cfg, 50, seed=10)
    written = batch.save(tmp_path / "b.npz")
    other = run_batch(paper_cfg, 50, seed=11)
    np.savez(written, z=other.z, d_total=other.d_total, s_aggregate=other.s_aggregate,
             claim_count=other.claim_count)
    with pytest.raises(ValueError):
        BatchResult.load(written)


def test_single_stream_config():
    line = LineSpec(TailSpec(2.0, 1.5), TailSpec(4.0, 1.5), 1.0, 0.0, 0.0)
    cfg = ModelConfig((line,), 3.0, LinearDrift(0.4), 2.0)
    batch = run_batch(cfg, 500, seed=12)
    assert np.array_equal(batch.d_total, batch.s_aggregate)
