"""
Exact breakdown bounds for ranking medians.

Budgets here are L1 distances ||p - q||_1 (twice the total variation). The
reverse-mass attack at budget eps moves eps / 2 of probability from the
Kemeny median to its reversal, so its L1 cost is eps and its TV is eps / 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence

import numpy as np

from ..consensus import metric_median
from ..dists import RankingDistribution
from ..perms import (
    Permutation,
    check_n,
    distance_matrix,
    expected_distances,
    get_metric,
    n_pairs,
    perm_index,
    permutation_at,
    reverse,
)

MAX_UPPER_ITEMS = 6
MAX_LOWER_ITEMS = 5
DELTA_TOL = 1e-12
ZERO_TOL = 1e-12
BUDGET_UNIT = "l1"


@dataclass(frozen=True)
class BreakdownQuery:
    p: RankingDistribution
    delta: float
    statistic: str = "kemeny"
    metric: str = "kendall"

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta={self.delta} must lie in [0, 1]")
        get_metric(self.metric)


@dataclass(frozen=True)
class BoundResult:
    value: Optional[float]
    condition_ok: bool
    witness: Optional[RankingDistribution] = None
    sigma: Optional[Permutation] = None
    median: Optional[Permutation] = None
    delta: float = 0.0

    @property
    def unbreakable(self) -> bool:
        return self.value is None


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not delta <= 1.0:
        raise ValueError(f"delta={delta} must be at most 1")
    return delta


def _snap(x: np.ndarray) -> np.ndarray:
    return np.where(np.abs(x) < ZERO_TOL, 0.0, x)


def no_far_rankings(median: Permutation, delta: float) -> BoundResult:
    """Both bounds when nothing lies delta away from the median: no value, condition not met."""
    return BoundResult(None, False, None, None, median, delta)


def reverse_attack(p: RankingDistribution, eps: float) -> RankingDistribution:
    """Move eps / 2 of mass from the Kemeny median to its reversal."""
    if eps < 0:
        raise ValueError(f"attack budget eps={eps} must be nonnegative")
    median = metric_median(p, "kendall").median
    star = perm_index(median)
    mass = float(p.probs[star])
    if eps > 2.0 * mass + ZERO_TOL:
        raise ValueError(f"budget eps={eps} exceeds twice the median mass {mass}")
    shift = min(eps / 2.0, mass)
    probs = np.array(p.probs)
    probs[star] -= shift
    probs[perm_index(reverse(median))] += shift
    return RankingDistribution(p.n, probs)


def epsilon_plus(p: RankingDistribution, delta: float) -> BoundResult:
    """Upper bound on the Kemeny breakdown function, with the reverse-mass witness.

    Cost O((n!)^2), n <= 6. `value` is None when no ranking lies at distance delta.
    """
    n = check_n(p.n, MAX_UPPER_ITEMS)
    delta = _check_delta(delta)
    med = metric_median(p, "kendall")
    star = med.index
    if delta <= 0:
        return BoundResult(0.0, True, p, med.median, med.median, delta)

    expected = expected_distances(p.probs, n, "kendall")
    from_star = distance_matrix(n, "kendall")[star]
    far = from_star >= delta - DELTA_TOL
    if not np.any(far):
        return no_far_rankings(med.median, delta)
    near = ~far

    sigmas = np.flatnonzero(far)
    nus = np.flatnonzero(near)
    num = _snap(expected[sigmas][:, None] - expected[nus][None, :])
    den = from_star[sigmas][:, None] - from_star[nus][None, :]
    worst = (num / den).max(axis=1)
    best = int(np.argmin(worst))
    value = float(worst[best])

    condition_ok = value <= 2.0 * float(p.probs[star])
    witness = reverse_attack(p, value) if condition_ok else None
    return BoundResult(
        value=value,
        condition_ok=condition_ok,
        witness=witness,
        sigma=permutation_at(n, int(sigmas[best])),
        median=med.median,
        delta=delta,
    )


@lru_cache(maxsize=None)
def _reach_denominators(n: int, metric: str) -> np.ndarray:
    """den[s, v] = max over s' of |D[s', s] - D[s', v]|."""
    D = distance_matrix(n, metric)
    size = D.shape[0]
    den = np.empty((size, size))
    for s in range(size):
        den[s] = np.abs(D[:, [s]] - D).max(axis=0)
    return den


def epsilon_minus(
    p: RankingDistribution,
    delta: float,
    metric_m: str = "kendall",
    metric_d: str = "kendall",
) -> BoundResult:
    """Lower bound on the breakdown function of the d-median, deviation measured with m.

    Cost O((n!)^3), n <= 5.
    """
    n = check_n(p.n, MAX_LOWER_ITEMS)
    delta = _check_delta(delta)
    med = metric_median(p, metric_d)
    star = med.index
    if delta <= 0:
        return BoundResult(0.0, True, p, med.median, med.median, delta)

    from_star = distance_matrix(n, metric_m)[star]
    far = from_star >= delta - DELTA_TOL
    if not np.any(far):
        return no_far_rankings(med.median, delta)

    expected = expected_distances(p.probs, n, metric_d)
    den = _reach_denominators(n, metric_d)
    sigmas = np.flatnonzero(far)
    num = _snap(expected[sigmas][:, None] - expected[None, :])
    den = den[sigmas]
    ratio = np.full(num.shape, -np.inf)
    valid = den > 0
    ratio[valid] = num[valid] / den[valid]
    worst = ratio.max(axis=1)
    best = int(np.argmin(worst))
    return BoundResult(
        value=float(worst[best]),
        condition_ok=True,
        witness=None,
        sigma=permutation_at(n, int(sigmas[best])),
        median=med.median,
        delta=delta,
    )


def attainable_deltas(n: int, metric: str = "kendall") -> List[float]:
    """Distinct nonzero distances from a fixed ranking: the steps of a breakdown curve."""
    n = check_n(n)
    if metric == "kendall":
        return [k / n_pairs(n) for k in range(1, n_pairs(n) + 1)]
    row = distance_matrix(n, metric)[0]
    return sorted(set(float(x) for x in np.round(row, 12) if x > 0))


@dataclass
class BreakdownCurve:
    deltas: List[float]
    lower: List[Optional[float]] = field(default_factory=list)
    upper: List[Optional[float]] = field(default_factory=list)
    condition_ok: List[bool] = field(default_factory=list)
    unit: str = BUDGET_UNIT

    def rows(self) -> List[dict]:
        return [
            {"delta": d, "eps_lower": lo, "eps_upper": up, "condition_ok": ok}
            for d, lo, up, ok in zip(self.deltas, self.lower, self.upper, self.condition_ok)
        ]


def breakdown_curve_bounds(
    p: RankingDistribution,
    deltas: Optional[Sequence[float]] = None,
    metric_m: str = "kendall",
    metric_d: str = "kendall",
) -> BreakdownCurve:
    """Raw per-delta lower and upper bounds; the upper bound only applies to Kemeny and only where its condition holds."""
    if deltas is None:
        deltas = [0.0] + attainable_deltas(p.n, metric_m)
    curve = BreakdownCurve(deltas=[float(d) for d in deltas])
    for delta in curve.deltas:
        if not 0.0 <= delta <= 1.0:
            raise ValueError(f"delta={delta} must lie in [0, 1]")
        lower = epsilon_minus(p, delta, metric_m, metric_d) if p.n <= MAX_LOWER_ITEMS else None
        curve.lower.append(None if lower is None else lower.value)
        if metric_d == "kendall" and metric_m == "kendall":
            upper = epsilon_plus(p, delta)
            curve.upper.append(upper.value if upper.condition_ok else None)
            curve.condition_ok.append(upper.condition_ok)
        else:
            curve.upper.append(None)
            curve.condition_ok.append(False)
    return curve
