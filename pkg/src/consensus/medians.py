"""
Exact ranking medians by enumeration of S_n, the Kemeny fast path for
strictly stochastically transitive inputs, and Borda.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..dists import PAIR_TOL, PairwiseMatrix, RankingDistribution, is_sst
from ..perms import Permutation, all_ranks, expected_distances, permutation_at
from ..perms.metrics import mean_ranks

TIE_TOL = 1e-12
BORDA_DECIMALS = 12


@dataclass(frozen=True)
class MedianResult:
    median: Permutation
    objective: float
    argmin_set: Tuple[Permutation, ...]
    index: int

    @property
    def is_unique(self) -> bool:
        return len(self.argmin_set) == 1


def argmin_mask(objective: np.ndarray) -> np.ndarray:
    """Entries within TIE_TOL of the row minimum."""
    best = objective.min(axis=-1, keepdims=True)
    return objective <= best + TIE_TOL


def median_indices(objective: np.ndarray) -> np.ndarray:
    """Smallest PermIndex among the minimizers, row-wise."""
    return np.argmax(argmin_mask(objective), axis=-1)


def metric_median(p: RankingDistribution, metric: str = "kendall") -> MedianResult:
    """Brute-force argmin of E_p[d(sigma, Sigma)] over S_n, ties to the smallest PermIndex."""
    n = p.n
    objective = expected_distances(p.probs, n, metric)
    mask = argmin_mask(objective)
    members = np.flatnonzero(mask)
    best = int(members[0])
    return MedianResult(
        median=permutation_at(n, best),
        objective=float(objective[best]),
        argmin_set=tuple(permutation_at(n, int(k)) for k in members),
        index=best,
    )


def kemeny_median(p: RankingDistribution) -> MedianResult:
    return metric_median(p, "kendall")


def kemeny_median_sst(P: PairwiseMatrix) -> Permutation:
    """sigma(i) = 1 + #{k : P_ik < 1/2}; only valid under strict SST."""
    if not is_sst(P, strict=True):
        raise ValueError("pairwise matrix is not strictly stochastically transitive")
    below = (P.entries < 0.5 - PAIR_TOL).sum(axis=1)
    return Permutation(tuple(int(b) + 1 for b in below))


def borda_ranks(probs: np.ndarray, n: int) -> np.ndarray:
    """Rank vectors sorting items by mean rank, ties by item id; batch-aware."""
    means = np.round(mean_ranks(probs, n), BORDA_DECIMALS)
    order = np.argsort(means, axis=-1, kind="stable")
    return np.argsort(order, axis=-1, kind="stable") + 1


def borda(p: RankingDistribution) -> Permutation:
    return Permutation(tuple(int(r) for r in borda_ranks(p.probs, p.n)))


def median_ranks(probs: np.ndarray, n: int, metric: str = "kendall") -> np.ndarray:
    """Rank vectors of the tie-broken median for a stack of distributions."""
    idx = median_indices(expected_distances(probs, n, metric))
    return all_ranks(n)[idx]
