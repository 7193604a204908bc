"""
Distribution families used in experiments: Plackett-Luce models and the
hand-crafted "almost" uniform / point-mass / bucket distributions.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..perms import Permutation, adjacent_swap, all_ranks, check_n
from .distributions import RankingDistribution, mixture, point_mass, uniform

NAMED_KINDS = ("uniform-ish", "pointmass-ish", "bucket-ish")
DEFAULT_ETA = 0.95
DEFAULT_GAP = 0.1


def plackett_luce(weights: Sequence[float], n: Optional[int] = None) -> RankingDistribution:
    """Exact sequential-choice probabilities for every permutation."""
    w = np.asarray(weights, dtype=np.float64)
    if n is None:
        n = w.shape[0]
    n = check_n(n)
    if w.shape != (n,):
        raise ValueError(f"expected {n} weights, got {w.shape[0]}")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise ValueError(f"Plackett-Luce weights must be positive, got {list(w)}")
    orders = np.argsort(all_ranks(n), axis=1)
    chosen = w[orders]
    remaining = np.cumsum(chosen[:, ::-1], axis=1)[:, ::-1]
    probs = np.prod(chosen / remaining, axis=1)
    return RankingDistribution(n, probs / probs.sum())


def random_plackett_luce_weights(n: int, seed) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.exp(rng.standard_normal(check_n(n)))


def random_plackett_luce(n: int, seed) -> RankingDistribution:
    """Plackett-Luce with standard-normal log-weights from a seeded generator."""
    return plackett_luce(random_plackett_luce_weights(n, seed), n)


def _normalize_kind(kind: str) -> str:
    key = kind.strip().lower().replace("_", "-")
    if not key.endswith("-ish"):
        key = key + "-ish"
    if key not in NAMED_KINDS:
        raise ValueError(f"unknown distribution kind {kind!r}; expected one of {NAMED_KINDS}")
    return key


def make_named(
    kind: str,
    sigma0: Optional[Permutation] = None,
    eta: float = DEFAULT_ETA,
    gap: float = DEFAULT_GAP,
    n: Optional[int] = None,
    swap_rank: int = 1,
) -> RankingDistribution:
    """(1 - eta) * uniform + eta * core, where the core depends on `kind`.

    bucket-ish puts (1 + gap) / 2 on sigma0 and (1 - gap) / 2 on sigma0 with
    the items at ranks `swap_rank` and `swap_rank + 1` exchanged.
    """
    key = _normalize_kind(kind)
    if sigma0 is None:
        if n is None:
            raise ValueError("make_named needs sigma0 or n")
        sigma0 = Permutation.identity(check_n(n))
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta={eta} must lie in [0, 1]")
    if not 0.0 <= gap <= 1.0:
        raise ValueError(f"gap={gap} must lie in [0, 1]")

    base = uniform(sigma0.n)
    if key == "uniform-ish":
        return base
    if key == "pointmass-ish":
        core = point_mass(sigma0)
    else:
        if sigma0.n < 2:
            raise ValueError("bucket-ish needs at least two items")
        neighbor = adjacent_swap(sigma0, swap_rank)
        core = mixture([point_mass(sigma0), point_mass(neighbor)], [0.5 + gap / 2, 0.5 - gap / 2])
    return mixture([base, core], [1.0 - eta, eta])
