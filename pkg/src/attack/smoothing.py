"""
Gaussian smoothing of the deviation of a statistic, in logit space.

The deviation H(T(p), T(q)) is piecewise constant in q, so its gradient is
estimated by the zeroth-order smoothing estimator
    (1 / (m * gamma)) * sum_k (H_k - mean(H)) * xi_k
with xi_k standard Gaussian perturbations of the logits.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.special import softmax

from ..buckets import VARIANTS, batch_hausdorff
from ..dists import RankingDistribution


@dataclass(frozen=True)
class AttackConfig:
    delta: float = 1.0 / 6.0
    gamma: float = 0.1
    samples: int = 64
    steps: int = 2000
    lr_q: float = 0.1
    lr_lambda: float = 0.5
    lambda_init: float = 1.0
    init_floor: float = 1e-6
    seed: int = 0
    variant: str = "ns"
    antithetic: bool = True
    refine: bool = True
    warm_start: bool = True

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta={self.delta} must lie in [0, 1]")
        for name in ("gamma", "lr_q", "lr_lambda", "init_floor"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name}={getattr(self, name)} must be positive")
        if self.lambda_init < 0:
            raise ValueError(f"lambda_init={self.lambda_init} must be nonnegative")
        if self.samples < 2:
            raise ValueError(f"samples={self.samples} must be at least 2")
        if self.steps < 1:
            raise ValueError(f"steps={self.steps} must be at least 1")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant={self.variant!r} must be one of {VARIANTS}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any], **overrides) -> "AttackConfig":
        """Build from a config section, ignoring keys that are not attack settings."""
        known = {f.name for f in fields(cls)}
        values = {k: v for k, v in dict(data).items() if k in known}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def draw_perturbations(rng: np.random.Generator, samples: int, dim: int, antithetic: bool = True) -> np.ndarray:
    """Standard Gaussian perturbations, paired as (xi, -xi) when antithetic."""
    if not antithetic:
        return rng.standard_normal((samples, dim))
    half = rng.standard_normal((samples // 2, dim))
    xi = np.concatenate([half, -half], axis=0)
    if samples % 2:
        xi = np.concatenate([xi, rng.standard_normal((1, dim))], axis=0)
    return xi


def rho_smoothed(
    p: RankingDistribution,
    z: np.ndarray,
    statistic,
    cfg: AttackConfig,
    rng: Optional[np.random.Generator] = None,
    reference_positions: Optional[np.ndarray] = None,
) -> Tuple[float, np.ndarray]:
    """Monte-Carlo estimate of the smoothed deviation at logits z and of its gradient."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape != p.probs.shape:
        raise ValueError(f"logits of shape {z.shape} do not match {p.probs.shape}")
    if not np.all(np.isfinite(z)):
        raise ValueError("logits must be finite")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    if reference_positions is None:
        reference_positions = statistic(p).positions()

    xi = draw_perturbations(rng, cfg.samples, z.shape[0], cfg.antithetic)
    q = softmax(z[None, :] + cfg.gamma * xi, axis=1)
    h = batch_hausdorff(reference_positions, statistic.positions(q, p.n), cfg.variant)
    estimate = float(h.mean())
    grad = (h - estimate) @ xi / (cfg.samples * cfg.gamma)
    return estimate, grad
