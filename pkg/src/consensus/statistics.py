"""
Statistics: maps from a ranking distribution to a bucket ranking.

Every statistic also works on a stack of raw probability vectors and returns
0-based bucket positions per item, which is what the attack evaluates at
each Monte-Carlo sample.
"""

from __future__ import annotations

import re
from typing import Dict

import numpy as np

from ..buckets import BucketRanking
from ..dists import PairwiseMatrix, RankingDistribution
from ..merge import check_theta, merge
from ..perms import Permutation
from ..perms.metrics import before_probabilities, pair_indices
from .medians import borda_ranks, median_ranks

MEDIAN_METRICS: Dict[str, str] = {
    "kemeny": "kendall",
    "footrule_median": "footrule",
    "rho_median": "spearman_rho",
}


class Statistic:
    label = "statistic"

    def positions(self, probs: np.ndarray, n: int) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, p: RankingDistribution) -> BucketRanking:
        pos = self.positions(p.probs[None, :], p.n)[0]
        return BucketRanking.from_positions(pos)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.label}>"


class MedianStatistic(Statistic):
    """Tie-broken metric median as singleton buckets."""

    def __init__(self, metric: str = "kendall", label: str = ""):
        self.metric = metric
        self.label = label or {v: k for k, v in MEDIAN_METRICS.items()}.get(metric, f"{metric}_median")

    def positions(self, probs, n):
        return median_ranks(np.atleast_2d(probs), n, self.metric) - 1


class KemenyStatistic(MedianStatistic):
    def __init__(self):
        super().__init__("kendall", "kemeny")


class BordaStatistic(Statistic):
    label = "borda"

    def positions(self, probs, n):
        return borda_ranks(np.atleast_2d(probs), n) - 1


class ConstantBucketStatistic(Statistic):
    """Every item in one bucket, whatever the input."""

    label = "constant_bucket"

    def positions(self, probs, n):
        return np.zeros((np.atleast_2d(probs).shape[0], n), dtype=np.int64)


class MergeStatistic(Statistic):
    """Naive or Downward Merge plugged on a metric median (Kemeny by default)."""

    def __init__(self, kind: str = "downward", theta: float = 0.05, median_metric: str = "kendall"):
        self.kind = kind
        self.theta = check_theta(theta)
        self.median_metric = median_metric
        self.label = f"{kind}_merge({theta:g})"

    def positions(self, probs, n):
        probs = np.atleast_2d(probs)
        ranks = median_ranks(probs, n, self.median_metric)
        before = before_probabilities(probs, n)
        i, j = pair_indices(n)
        out = np.empty((probs.shape[0], n), dtype=np.int64)
        for b in range(probs.shape[0]):
            P = np.full((n, n), 0.5)
            P[i, j] = before[b]
            P[j, i] = 1.0 - before[b]
            pi = merge(Permutation(tuple(ranks[b])), PairwiseMatrix(P), self.theta, self.kind)
            out[b] = pi.positions()
        return out


_MERGE_RE = re.compile(r"^(naive|downward)_merge(?:\(\s*([0-9.eE+-]+)\s*\))?$")


def make_statistic(text: str, theta: float = 0.05, median: str = "kemeny") -> Statistic:
    """Parse kemeny | borda | footrule_median | rho_median | naive_merge(θ) | downward_merge(θ) | constant_bucket."""
    key = text.strip().lower()
    if key == "kemeny":
        return KemenyStatistic()
    if key in MEDIAN_METRICS:
        return MedianStatistic(MEDIAN_METRICS[key], key)
    if key == "borda":
        return BordaStatistic()
    if key in ("constant_bucket", "constant"):
        return ConstantBucketStatistic()
    match = _MERGE_RE.match(key)
    if match:
        if median not in MEDIAN_METRICS:
            raise ValueError(f"unknown median {median!r} for merge; expected one of {sorted(MEDIAN_METRICS)}")
        value = float(match.group(2)) if match.group(2) else theta
        return MergeStatistic(match.group(1), value, MEDIAN_METRICS[median])
    raise ValueError(f"unknown statistic {text!r}")
