"""
Normalized distances between permutations and their expectations under a
ranking distribution.

All three metrics lie in [0, 1], are 0 on equal inputs and 1 on a reversal.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Dict, Tuple

import numpy as np

from .core import Permutation, all_ranks, check_n

DistanceFn = Callable[[Permutation, Permutation], float]

MAX_MATRIX_ITEMS = 6


def _check_pair(sigma: Permutation, nu: Permutation) -> int:
    if sigma.n != nu.n:
        raise ValueError(f"mismatched item counts: {sigma.n} vs {nu.n}")
    if sigma.n < 2:
        raise ValueError("distances need at least two items")
    return sigma.n


def n_pairs(n: int) -> int:
    return n * (n - 1) // 2


@lru_cache(maxsize=None)
def pair_indices(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Item index pairs (i, j) with i < j, 0-based, in row-major order."""
    i, j = np.triu_indices(n, k=1)
    return i, j


def pair_signs(ranks: np.ndarray) -> np.ndarray:
    """+1 where item i is ranked before item j, -1 otherwise, for every pair i < j.

    Works on a single rank vector or on a stack of shape (..., n).
    """
    ranks = np.asarray(ranks)
    i, j = pair_indices(ranks.shape[-1])
    return np.where(ranks[..., i] < ranks[..., j], 1, -1).astype(np.int8)


@lru_cache(maxsize=None)
def all_pair_signs(n: int) -> np.ndarray:
    """(n!, n(n-1)/2) pair signs of every permutation, rows in PermIndex order."""
    signs = pair_signs(all_ranks(n))
    signs.setflags(write=False)
    return signs


def kendall_tau(sigma: Permutation, nu: Permutation) -> float:
    n = _check_pair(sigma, nu)
    s = pair_signs(sigma.to_array())
    t = pair_signs(nu.to_array())
    return float(np.count_nonzero(s != t)) / n_pairs(n)


def _rho_scale(n: int) -> float:
    # the usual 6/(n(n^2-1)) constant, halved onto [0, 1]
    return 3.0 / (n * (n * n - 1))


def spearman_rho(sigma: Permutation, nu: Permutation) -> float:
    n = _check_pair(sigma, nu)
    diff = sigma.to_array() - nu.to_array()
    return float(np.dot(diff, diff)) * _rho_scale(n)


def _footrule_scale(n: int) -> float:
    return 1.0 / (n * n // 2)


def spearman_footrule(sigma: Permutation, nu: Permutation) -> float:
    n = _check_pair(sigma, nu)
    return float(np.abs(sigma.to_array() - nu.to_array()).sum()) * _footrule_scale(n)


METRICS: Dict[str, DistanceFn] = {
    "kendall": kendall_tau,
    "spearman_rho": spearman_rho,
    "footrule": spearman_footrule,
}


def get_metric(name: str) -> DistanceFn:
    try:
        return METRICS[name]
    except KeyError:
        raise ValueError(f"unknown metric {name!r}; expected one of {sorted(METRICS)}") from None


def distance_matrix(n: int, metric: str = "kendall") -> np.ndarray:
    """Dense (n!, n!) matrix D[a, b] = d(perm a, perm b). O((n!)^2 n^2) memory-bound, n <= 6."""
    n = check_n(n, MAX_MATRIX_ITEMS)
    if n < 2:
        raise ValueError("distances need at least two items")
    return _distance_matrix(n, metric).copy()


@lru_cache(maxsize=None)
def _distance_matrix(n: int, metric: str) -> np.ndarray:
    get_metric(metric)
    if metric == "kendall":
        s = all_pair_signs(n).astype(np.int64)
        npairs = n_pairs(n)
        dist = (npairs - s @ s.T) / (2.0 * npairs)
    else:
        r = all_ranks(n).astype(np.float64)
        diff = r[:, None, :] - r[None, :, :]
        if metric == "spearman_rho":
            dist = (diff * diff).sum(axis=-1) * _rho_scale(n)
        else:
            dist = np.abs(diff).sum(axis=-1) * _footrule_scale(n)
    dist.setflags(write=False)
    return dist


def mean_ranks(probs: np.ndarray, n: int) -> np.ndarray:
    """E[Sigma(i)] for each item, batch-aware: (..., n!) -> (..., n)."""
    return np.asarray(probs, dtype=np.float64) @ all_ranks(n).astype(np.float64)


def rank_marginals(probs: np.ndarray, n: int) -> np.ndarray:
    """M[..., i, r-1] = P(Sigma(i) = r)."""
    probs = np.asarray(probs, dtype=np.float64)
    onehot = _rank_onehot(n)
    return (probs @ onehot).reshape(probs.shape[:-1] + (n, n))


@lru_cache(maxsize=None)
def _rank_onehot(n: int) -> np.ndarray:
    ranks = all_ranks(n)
    onehot = np.zeros((ranks.shape[0], n * n))
    rows = np.arange(ranks.shape[0])[:, None]
    onehot[rows, np.arange(n)[None, :] * n + ranks - 1] = 1.0
    return onehot


def before_probabilities(probs: np.ndarray, n: int) -> np.ndarray:
    """P(Sigma(i) < Sigma(j)) for every pair i < j, batch-aware."""
    before = (all_pair_signs(n) > 0).astype(np.float64)
    return np.asarray(probs, dtype=np.float64) @ before


def expected_distances(probs: np.ndarray, n: int, metric: str = "kendall") -> np.ndarray:
    """E_p[d(Sigma, sigma)] for every sigma in S_n.

    Uses pairwise / rank moments instead of the n! x n! matrix, so the cost is
    O(n! n^2) and any n <= 8 works. `probs` may be a single vector of length
    n! or a stack of them.
    """
    n = check_n(n)
    if n < 2:
        raise ValueError("distances need at least two items")
    get_metric(metric)
    probs = np.asarray(probs, dtype=np.float64)
    if probs.shape[-1] != all_ranks(n).shape[0]:
        raise ValueError(f"probability vector of length {probs.shape[-1]} does not match n={n}")

    if metric == "kendall":
        npairs = n_pairs(n)
        a = before_probabilities(probs, n)
        s = all_pair_signs(n).astype(np.float64)
        return (npairs / 2.0 + (0.5 - a) @ s.T) / npairs

    ranks = all_ranks(n)
    if metric == "spearman_rho":
        mu = mean_ranks(probs, n)
        sq = n * (n + 1) * (2 * n + 1) / 6.0
        return (2.0 * sq - 2.0 * mu @ ranks.T.astype(np.float64)) * _rho_scale(n)

    m = rank_marginals(probs, n)
    levels = np.arange(1, n + 1, dtype=np.float64)
    gaps = np.abs(levels[:, None] - levels[None, :])
    cost = m @ gaps  # cost[..., i, r'-1] = E|r' - Sigma(i)|
    gathered = cost[..., np.arange(n)[None, :], ranks - 1]
    return gathered.sum(axis=-1) * _footrule_scale(n)
