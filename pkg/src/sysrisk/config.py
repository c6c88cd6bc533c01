"""Model description shared by the simulator and the asymptotic evaluators.

Claim streams are listed per line in a fixed order (line 1 X, line 1 Y,
line 2 X, ...).  The Pareto parameters quoted for the two-line example are
mapped onto that order; the TOML file names every stream explicitly so other
assignments can be written down.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple, Union

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .discounting import BrownianDrift, LevyModel, LinearDrift, find_alpha_star, laplace_exponent
from .errors import DomainError


@dataclass(frozen=True)
class TailSpec:
    """Pareto claim size with tail (gamma / (gamma + x)) ** alpha."""

    gamma: float
    alpha: float

    def __post_init__(self):
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise DomainError(f"gamma must be positive and finite, got {self.gamma}")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be positive and finite, got {self.alpha}")


@dataclass(frozen=True)
class LineSpec:
    x_claims: TailSpec
    y_claims: TailSpec
    x_intensity: float
    y_intensity: float
    premium_rate: float = 0.0

    def __post_init__(self):
        # zero intensities are representable (degenerate test configs); validate() flags them
        for name in ("x_intensity", "y_intensity", "premium_rate"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be nonnegative and finite, got {value}")


@dataclass(frozen=True)
class ModelConfig:
    lines: Tuple[LineSpec, ...]
    copula_theta: float
    discount: LevyModel
    horizon_t: float
    reference_line_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        if not self.lines:
            raise DomainError("a model needs at least one business line")
        if not 0 <= self.reference_line_index < len(self.lines):
            raise DomainError(f"reference_line_index {self.reference_line_index} out of range")

    @property
    def d(self) -> int:
        return len(self.lines)

    @property
    def alpha(self) -> float:
        """Common tail index (taken from the reference distribution)."""
        return self.reference.alpha

    @property
    def reference(self) -> TailSpec:
        return self.lines[self.reference_line_index].x_claims

    def streams(self) -> List[Tuple[int, TailSpec, float]]:
        """(line index, claim tail, intensity) in canonical order: line, then X before Y."""
        out = []
        for k, line in enumerate(self.lines):
            out.append((k, line.x_claims, line.x_intensity))
            out.append((k, line.y_claims, line.y_intensity))
        return out

    def replace(self, **changes) -> "ModelConfig":
        kwargs = {f: getattr(self, f) for f in self.__dataclass_fields__}
        kwargs.update(changes)
        return ModelConfig(**kwargs)


@dataclass
class ValidationReport:
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "config OK"
        return "\n".join(f"violation: {v}" for v in self.violations)


def validate(config: ModelConfig, need_ses_mes: bool = False) -> ValidationReport:
    """Collect every violated model hypothesis.

    A common tail index, positive intensities, the moment condition on the
    discount process, and (with ``need_ses_mes``) alpha > 1 are checked.
    """
    report = ValidationReport()
    alphas = sorted({s.alpha for _, s, _ in config.streams()})
    if len(alphas) > 1:
        report.violations.append(f"all claims must share one tail index, found {alphas}")
    alpha = config.alpha
    for k, line in enumerate(config.lines):
        if line.x_intensity <= 0 or line.y_intensity <= 0:
            report.violations.append(f"line {k + 1}: claim intensities must be positive")
    if not config.copula_theta > 0:
        report.violations.append(f"copula theta must be positive, got {config.copula_theta}")
    if not config.horizon_t > 0:
        report.violations.append(f"horizon t must be positive, got {config.horizon_t}")
    if find_alpha_star(config.discount, alpha) is None:
        report.violations.append(
            f"no alpha* > alpha = {alpha} with phi(alpha*) < 0 for {config.discount}"
        )
    if need_ses_mes and not alpha > 1:
        report.violations.append(f"alpha must exceed 1 for SES/MES, got {alpha}")
    return report


def phi_alpha(config: ModelConfig) -> float:
    """Laplace exponent of the discount process at the common tail index."""
    return laplace_exponent(config.discount, config.alpha)


# --- TOML -----------------------------------------------------------------

def _tail_from(table: dict) -> Tuple[TailSpec, float]:
    return TailSpec(float(table["gamma"]), float(table["alpha"])), float(table["intensity"])


def _discount_from(table: dict) -> LevyModel:
    kind = table.get("kind", "linear")
    if kind == "linear":
        return LinearDrift(float(table["delta"]))
    if kind == "brownian":
        return BrownianDrift(float(table["mu"]), float(table["sigma"]))
    raise DomainError(f"unknown discount kind {kind!r}")


def config_from_dict(data: dict) -> ModelConfig:
    lines = []
    for entry in data["lines"]:
        x_tail, x_int = _tail_from(entry["x"])
        y_tail, y_int = _tail_from(entry["y"])
        lines.append(LineSpec(x_tail, y_tail, x_int, y_int, float(entry.get("premium_rate", 0.0))))
    return ModelConfig(
        lines=tuple(lines),
        copula_theta=float(data["copula_theta"]),
        discount=_discount_from(data["discount"]),
        horizon_t=float(data["horizon_t"]),
        reference_line_index=int(data.get("reference_line_index", 0)),
    )


def load_config(path: Union[str, Path]) -> ModelConfig:
    with open(path, "rb") as fh:
        return config_from_dict(tomllib.load(fh))


def config_to_dict(config: ModelConfig) -> dict:
    disc = config.discount
    if isinstance(disc, LinearDrift):
        discount = {"kind": "linear", "delta": disc.delta}
    else:
        discount = {"kind": "brownian", "mu": disc.mu, "sigma": disc.sigma}
    return {
        "horizon_t": config.horizon_t,
        "copula_theta": config.copula_theta,
        "reference_line_index": config.reference_line_index,
        "discount": discount,
        "lines": [
            {
                "premium_rate": line.premium_rate,
                "x": {**asdict(line.x_claims), "intensity": line.x_intensity},
                "y": {**asdict(line.y_claims), "intensity": line.y_intensity},
            }
            for line in config.lines
        ],
    }


def config_digest(config: ModelConfig) -> str:
    """sha256 of the canonical JSON form; floats are written with repr precision."""
    blob = json.dumps(config_to_dict(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def paper_config(theta: float = 3.0, horizon_t: float = 1.0, alpha: float = 1.2) -> ModelConfig:
    """The two-line setting of the published numerical study (theta is not published)."""
    gammas = (2.0, 4.0, 3.0, 4.0)
    lams = (0.4, 0.7, 0.5, 0.7)
    lines = [
        LineSpec(TailSpec(gammas[2 * k], alpha), TailSpec(gammas[2 * k + 1], alpha),
                 lams[2 * k], lams[2 * k + 1], premium_rate=5.0)
        for k in range(2)
    ]
    return ModelConfig(tuple(lines), theta, LinearDrift(0.4), horizon_t)
