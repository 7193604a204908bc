"""
Pairwise preference matrices and stochastic transitivity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..perms import Permutation, n_pairs
from ..perms.metrics import before_probabilities, pair_indices
from .distributions import RankingDistribution

PAIR_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PairwiseMatrix:
    """P[i, j] = P(item i+1 ranked before item j+1); diagonal fixed at 1/2."""

    entries: np.ndarray

    def __post_init__(self):
        P = np.array(self.entries, dtype=np.float64)
        if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] < 1:
            raise ValueError(f"pairwise matrix must be square, got shape {P.shape}")
        if np.any(P < -PAIR_TOL) or np.any(P > 1 + PAIR_TOL):
            raise ValueError("pairwise probabilities must lie in [0, 1]")
        if np.any(np.abs(np.diag(P) - 0.5) > PAIR_TOL):
            raise ValueError("pairwise matrix diagonal must be 1/2")
        if np.any(np.abs(P + P.T - 1.0) > PAIR_TOL):
            raise ValueError("pairwise matrix must satisfy P_ij + P_ji = 1")
        P.setflags(write=False)
        object.__setattr__(self, "entries", P)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_upper(cls, n: int, upper: dict) -> "PairwiseMatrix":
        """Build from {(i, j): P_ij} with 1-based i < j; the rest follows by complement."""
        P = np.full((n, n), 0.5)
        for (i, j), value in upper.items():
            if not 1 <= i < j <= n:
                raise ValueError(f"pair ({i}, {j}) is not an ordered pair of items 1..{n}")
            P[i - 1, j - 1] = value
            P[j - 1, i - 1] = 1.0 - value
        return cls(P)

    def deviation(self) -> np.ndarray:
        """|P_ij - 1/2| elementwise."""
        return np.abs(self.entries - 0.5)

    def __getitem__(self, key):
        return self.entries[key]


def pairwise_matrix(p: RankingDistribution) -> PairwiseMatrix:
    n = p.n
    P = np.full((n, n), 0.5)
    if n >= 2:
        before = before_probabilities(p.probs, n)
        i, j = pair_indices(n)
        P[i, j] = before
        P[j, i] = 1.0 - before
    return PairwiseMatrix(P)


def is_sst(P: PairwiseMatrix, strict: bool = False) -> bool:
    """Stochastic transitivity: P_ij >= 1/2 and P_jk >= 1/2 imply P_ik >= 1/2.

    The strict version uses > and also requires every off-diagonal entry to
    differ from 1/2, so the preference relation is a total order. Entries
    within PAIR_TOL of 1/2 count as ties.
    """
    E = P.entries
    n = P.n
    off = ~np.eye(n, dtype=bool)
    if strict:
        if np.any(np.abs(E[off] - 0.5) <= PAIR_TOL):
            return False
        prefer = (E > 0.5 + PAIR_TOL) & off
    else:
        prefer = (E >= 0.5 - PAIR_TOL) & off
    step = prefer.astype(np.int64)
    reach = ((step @ step) > 0) & off
    return not bool(np.any(reach & ~prefer))


def kemeny_objective(P: PairwiseMatrix, sigma: Permutation) -> float:
    """Expected Kendall distance to sigma, from the pairwise marginals alone."""
    n = P.n
    if sigma.n != n:
        raise ValueError(f"mismatched item counts: {sigma.n} vs {n}")
    if n < 2:
        raise ValueError("distances need at least two items")
    i, j = pair_indices(n)
    r = sigma.to_array()
    # disagreement probability is P_ji when sigma puts i first
    disagree = np.where(r[i] < r[j], P.entries[j, i], P.entries[i, j])
    return float(disagree.sum()) / n_pairs(n)


def pairwise_l1(P: PairwiseMatrix, Q: PairwiseMatrix) -> float:
    """Mean |P_ij - Q_ij| over pairs i < j; bounded above by TV of the underlying distributions."""
    if P.n != Q.n:
        raise ValueError(f"mismatched item counts: {P.n} vs {Q.n}")
    i, j = pair_indices(P.n)
    return float(np.abs(P.entries[i, j] - Q.entries[i, j]).mean())
