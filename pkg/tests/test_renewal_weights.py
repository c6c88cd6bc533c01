import math

import numpy as np
import pytest
from scipy import integrate

from sysrisk.config import LineSpec, ModelConfig, TailSpec, paper_config
from sysrisk.discounting import LinearDrift
from sysrisk.errors import DomainError
from sysrisk.renewal_weights import (PoissonIntensity, TabulatedRenewal, exposure_integral, line_weight,
                                     total_weight)


def test_exposure_examples(golden):
    assert exposure_integral(PoissonIntensity(0.4), 0.0, 1.0) == pytest.approx(0.4, rel=1e-15)
    assert exposure_integral(PoissonIntensity(0.4), -0.48, 1.0) == pytest.approx(
        golden["exposure_lam04_phi048"], rel=1e-12)
    assert exposure_integral(PoissonIntensity(0.4), -0.48, 0.0) == 0.0


def test_negative_horizon():
    with pytest.raises(DomainError):
        exposure_integral(PoissonIntensity(0.4), -0.48, -1.0)


def test_closed_form_matches_quadrature():
    rng = np.random.default_rng(0)
    for _ in range(100):
        lam, phi, t = rng.uniform(0.01, 5), -rng.uniform(0, 3), rng.uniform(0, 10)
        oracle, _ = integrate.quad(lambda s: lam * math.exp(phi * s), 0, t, epsabs=0, epsrel=1e-13)
        assert exposure_integral(PoissonIntensity(lam), phi, t) == pytest.approx(oracle, rel=1e-10, abs=1e-14)


def test_continuity_at_zero_phi():
    assert abs(exposure_integral(PoissonIntensity(0.7), -1e-12, 2.0) - 1.4) < 1e-9


def test_monotone_and_bounded():
    lam, phi = 0.7, -0.48
    values = [exposure_integral(PoissonIntensity(lam), phi, t) for t in np.linspace(0, 50, 200)]
    assert np.all(np.diff(values) >= 0)
    assert max(values) <= lam / -phi


def test_tabulated_matches_poisson():
    lam, phi = 0.5, -0.48
    times = np.linspace(0, 2, 4001)
    tab = TabulatedRenewal(tuple(zip(times, lam * times)))
    for t in (0.3, 1.0, 1.7777):
        assert exposure_integral(tab, phi, t) == pytest.approx(
            exposure_integral(PoissonIntensity(lam), phi, t), rel=1e-7)
    assert exposure_integral(tab, phi, 0.0) == 0.0


def test_tabulated_atom_at_origin():
    tab = TabulatedRenewal(((0.0, 0.0), (0.0, 1.0), (1.0, 1.0)))
    assert exposure_integral(tab, -0.5, 0.0) == 1.0
    assert exposure_integral(tab, -0.5, 1.0) == 1.0


@pytest.mark.parametrize("grid", [((0.1, 0.0), (1.0, 1.0)), ((0.0, 0.0), (1.0, 2.0), (2.0, 1.0))])
def test_tabulated_validation(grid):
    with pytest.raises(DomainError):
        TabulatedRenewal(grid)


def test_line_weight_paper_line1(golden, paper_cfg):
    line = paper_cfg.lines[0]
    assert line_weight(line, paper_cfg.reference, -0.48, 1.0) == pytest.approx(golden["line_weights"][0], rel=1e-12)
    assert line_weight(line, paper_cfg.reference, -0.48, 0.0) == 0.0


def test_line_weight_reduces_to_single_exposure():
    ref = TailSpec(2.0, 1.2)
    line = LineSpec(ref, TailSpec(4.0, 1.2), 0.4, 0.0)
    assert line_weight(line, ref, -0.48, 1.0) == exposure_integral(PoissonIntensity(0.4), -0.48, 1.0)


def test_total_weight_paper(golden, paper_cfg):
    w = total_weight(paper_cfg, 1.0)
    np.testing.assert_allclose(w.per_line, golden["line_weights"], rtol=1e-12)
    assert w.total == pytest.approx(golden["total_weight"], rel=1e-12)
    np.testing.assert_allclose(w.shares, golden["shares"], rtol=1e-12)
    assert w.shares.sum() == pytest.approx(1.0, rel=1e-15)
    assert np.all((w.shares > 0) & (w.shares < 1))


def test_identical_lines_share_equally():
    line = LineSpec(TailSpec(2.0, 1.2), TailSpec(4.0, 1.2), 0.4, 0.7)
    cfg = ModelConfig((line,) * 3, 3.0, LinearDrift(0.4), 1.0)
    np.testing.assert_allclose(total_weight(cfg, 1.0).shares, [1 / 3] * 3, rtol=1e-14)


def test_share_increases_with_intensity(paper_cfg):
    before = total_weight(paper_cfg, 1.0).shares[1]
    line = paper_cfg.lines[1]
    doubled = LineSpec(line.x_claims, line.y_claims, 2 * line.x_intensity, 2 * line.y_intensity,
                       line.premium_rate)
    after = total_weight(paper_cfg.replace(lines=(paper_cfg.lines[0], doubled)), 1.0).shares[1]
    assert after > before
