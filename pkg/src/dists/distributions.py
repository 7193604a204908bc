"""
Dense probability distributions over S_n, indexed by PermIndex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Sequence

import numpy as np

from ..perms import Permutation, all_ranks, check_n, n_perms, perm_index

SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class RankingDistribution:
    n: int
    probs: np.ndarray

    def __post_init__(self):
        n = check_n(self.n)
        probs = np.array(self.probs, dtype=np.float64).reshape(-1)
        if probs.shape[0] != n_perms(n):
            raise ValueError(f"expected {n_perms(n)} probabilities for n={n}, got {probs.shape[0]}")
        if not np.all(np.isfinite(probs)):
            raise ValueError("probabilities must be finite")
        if np.any(probs < 0):
            raise ValueError(f"negative probability {probs.min()!r}")
        total = probs.sum()
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def normalized(cls, n: int, weights: Sequence[float]) -> "RankingDistribution":
        """Rescale nonnegative weights to sum to one."""
        w = np.asarray(weights, dtype=np.float64)
        if np.any(w < 0) or w.sum() <= 0:
            raise ValueError("weights must be nonnegative with a positive sum")
        return cls(n, w / w.sum())

    def prob(self, sigma: Permutation) -> float:
        if sigma.n != self.n:
            raise ValueError(f"mismatched item counts: {sigma.n} vs {self.n}")
        return float(self.probs[perm_index(sigma)])

    def equals(self, other: "RankingDistribution") -> bool:
        return self.n == other.n and np.array_equal(self.probs, other.probs)

    def to_json(self) -> Dict[str, Any]:
        return {"n": self.n, "probs": [float(x) for x in self.probs]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "RankingDistribution":
        return cls(int(data["n"]), data["probs"])

    def __repr__(self) -> str:
        return f"RankingDistribution(n={self.n}, support={int(np.count_nonzero(self.probs))})"


def uniform(n: int) -> RankingDistribution:
    n = check_n(n)
    return RankingDistribution(n, np.full(n_perms(n), 1.0 / n_perms(n)))


def point_mass(sigma: Permutation) -> RankingDistribution:
    probs = np.zeros(n_perms(sigma.n))
    probs[perm_index(sigma)] = 1.0
    return RankingDistribution(sigma.n, probs)


def mixture(components: Sequence[RankingDistribution], weights: Sequence[float]) -> RankingDistribution:
    if len(components) != len(weights) or not components:
        raise ValueError("mixture needs one weight per component")
    n = components[0].n
    if any(c.n != n for c in components):
        raise ValueError("mixture components have different item counts")
    w = np.asarray(weights, dtype=np.float64)
    if np.any(w < 0) or abs(w.sum() - 1.0) > SUM_TOL:
        raise ValueError(f"mixture weights {list(w)} are not a probability vector")
    probs = sum(wi * c.probs for wi, c in zip(w, components))
    return RankingDistribution(n, probs)


def total_variation(p: RankingDistribution, q: RankingDistribution) -> float:
    if p.n != q.n:
        raise ValueError(f"mismatched item counts: {p.n} vs {q.n}")
    return 0.5 * float(np.abs(p.probs - q.probs).sum())


def relabel_items(p: RankingDistribution, mapping: Permutation) -> RankingDistribution:
    """Rename item i to mapping.ranks[i-1] in every ranking of p."""
    if mapping.n != p.n:
        raise ValueError(f"mismatched item counts: {mapping.n} vs {p.n}")
    ranks = all_ranks(p.n)
    target = np.empty_like(ranks)
    target[:, np.asarray(mapping.ranks) - 1] = ranks
    probs = np.zeros_like(p.probs)
    for k, row in enumerate(target):
        probs[perm_index(Permutation(tuple(row)))] += p.probs[k]
    return RankingDistribution(p.n, probs)
