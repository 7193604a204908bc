"""
Hausdorff extensions of Kendall tau to bucket rankings.

Both versions are normalized by n(n-1)/2. `hausdorff_ns(pi1, pi2)` is
max over sigma2 compatible with pi2 of min over sigma1 compatible with pi1 of
the Kendall distance; it vanishes whenever pi2 refines pi1 and is not
symmetric. `hausdorff_half` is its average with the swapped arguments.
"""

from __future__ import annotations

import itertools
from typing import Dict, Set, Tuple

import numpy as np

from ..perms import check_n, n_pairs
from ..perms.metrics import pair_indices, pair_signs
from .orders import BucketRanking, compatible_permutations

MAX_ORACLE_ITEMS = 5
VARIANTS = ("ns", "half")


def _check(pi1: BucketRanking, pi2: BucketRanking) -> int:
    if pi1.n != pi2.n:
        raise ValueError(f"mismatched item counts: {pi1.n} vs {pi2.n}")
    if pi1.n < 2:
        raise ValueError("distances need at least two items")
    return pi1.n


def mean_ranks(pi: BucketRanking) -> np.ndarray:
    """Mean rank of each item: sizes of the preceding buckets + (own size + 1) / 2."""
    out = np.empty(pi.n, dtype=np.float64)
    preceding = 0
    for bucket in pi.buckets:
        for item in bucket:
            out[item - 1] = preceding + (len(bucket) + 1) / 2.0
        preceding += len(bucket)
    return out


def profile(pi: BucketRanking) -> np.ndarray:
    """+1/2 where i precedes j, 0 on ties, -1/2 otherwise, for every pair i < j."""
    bar = mean_ranks(pi)
    i, j = pair_indices(pi.n)
    return 0.5 * np.sign(bar[j] - bar[i])


def _strict_signs(positions: np.ndarray) -> np.ndarray:
    """sign(pos[j] - pos[i]) per pair i < j: +1 before, 0 tied, -1 after."""
    positions = np.asarray(positions)
    i, j = pair_indices(positions.shape[-1])
    return np.sign(positions[..., j] - positions[..., i]).astype(np.int8)


def hausdorff_ns(pi1: BucketRanking, pi2: BucketRanking) -> float:
    """O(n^2): pairs strictly ordered both ways, plus pairs tied in pi2 but strict in pi1."""
    n = _check(pi1, pi2)
    s1 = _strict_signs(pi1.positions())
    s2 = _strict_signs(pi2.positions())
    count = np.count_nonzero(s1 * s2 < 0) + np.count_nonzero((s2 == 0) & (s1 != 0))
    return float(count) / n_pairs(n)


def hausdorff_half(pi1: BucketRanking, pi2: BucketRanking) -> float:
    """Profile form: ||prof(pi1) - prof(pi2)||_1, normalized."""
    n = _check(pi1, pi2)
    return float(np.abs(profile(pi1) - profile(pi2)).sum()) / n_pairs(n)


def _strict_pairs(pi: BucketRanking) -> Set[Tuple[int, int]]:
    bar = mean_ranks(pi)
    return {(a, b) for a, b in itertools.combinations(range(pi.n), 2) if bar[a] != bar[b]}


def _opposed_pairs(pi1: BucketRanking, pi2: BucketRanking) -> Set[Tuple[int, int]]:
    b1, b2 = mean_ranks(pi1), mean_ranks(pi2)
    return {
        (a, b)
        for a, b in itertools.combinations(range(pi1.n), 2)
        if b1[a] != b1[b] and (b1[a] - b1[b]) * (b2[a] - b2[b]) < 0
    }


def hausdorff_half_sets(pi1: BucketRanking, pi2: BucketRanking) -> float:
    """Set-counting form: #opposed + (#tied only in pi1 + #tied only in pi2) / 2."""
    n = _check(pi1, pi2)
    strict1, strict2 = _strict_pairs(pi1), _strict_pairs(pi2)
    tied_only_1 = strict2 - strict1
    tied_only_2 = strict1 - strict2
    total = len(_opposed_pairs(pi1, pi2)) + 0.5 * (len(tied_only_1) + len(tied_only_2))
    return total / n_pairs(n)


def hausdorff_half_indicators(pi1: BucketRanking, pi2: BucketRanking) -> float:
    """Indicator-sum form over pairs, on mean ranks."""
    n = _check(pi1, pi2)
    b1, b2 = mean_ranks(pi1), mean_ranks(pi2)
    total = 0.0
    for a, b in itertools.combinations(range(n), 2):
        d1 = b1[a] - b1[b]
        d2 = b2[a] - b2[b]
        total += 1.0 * (d1 * d2 < 0) + 0.5 * (d1 == 0) * (d2 != 0) + 0.5 * (d2 == 0) * (d1 != 0)
    return total / n_pairs(n)


def _discordances(order_a: np.ndarray, order_b: np.ndarray) -> int:
    return int(np.count_nonzero(pair_signs(order_a) != pair_signs(order_b)))


def hausdorff_oracle(pi1: BucketRanking, pi2: BucketRanking, direction: str = "ns") -> float:
    """Literal max-min over compatible permutations. Cost prod|bucket|! squared, n <= 5.

    direction "ns" gives H(pi1, pi2), "reverse" gives H(pi2, pi1), "half" their mean.
    """
    n = _check(pi1, pi2)
    check_n(n, MAX_ORACLE_ITEMS)
    if direction == "reverse":
        return hausdorff_oracle(pi2, pi1, "ns")
    if direction == "half":
        return 0.5 * (hausdorff_oracle(pi1, pi2, "ns") + hausdorff_oracle(pi2, pi1, "ns"))
    if direction != "ns":
        raise ValueError(f"unknown direction {direction!r}")
    first = [s.to_array() for s in compatible_permutations(pi1)]
    second = [s.to_array() for s in compatible_permutations(pi2)]
    worst = max(min(_discordances(s1, s2) for s1 in first) for s2 in second)
    return float(worst) / n_pairs(n)


HAUSDORFF: Dict[str, object] = {"ns": hausdorff_ns, "half": hausdorff_half}


def hausdorff(pi1: BucketRanking, pi2: BucketRanking, variant: str = "ns") -> float:
    if variant not in HAUSDORFF:
        raise ValueError(f"unknown Hausdorff variant {variant!r}; expected one of {VARIANTS}")
    return HAUSDORFF[variant](pi1, pi2)


def batch_hausdorff(reference_positions: np.ndarray, positions: np.ndarray, variant: str = "ns") -> np.ndarray:
    """Deviation H(reference, other) for a stack of bucket orders given as positions (B, n)."""
    reference_positions = np.asarray(reference_positions)
    n = reference_positions.shape[-1]
    if np.asarray(positions).shape[-1] != n:
        raise ValueError("mismatched item counts in batch_hausdorff")
    s1 = _strict_signs(reference_positions).astype(np.int64)
    s2 = _strict_signs(positions).astype(np.int64)
    if variant == "ns":
        count = ((s1 * s2) < 0).sum(axis=-1) + ((s2 == 0) & (s1 != 0)).sum(axis=-1)
        return count.astype(np.float64) / n_pairs(n)
    if variant == "half":
        return np.abs(s1 - s2).sum(axis=-1) / (2.0 * n_pairs(n))
    raise ValueError(f"unknown Hausdorff variant {variant!r}; expected one of {VARIANTS}")
