"""
Bucket rankings: ordered partitions of the items 1..n into tied buckets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Sequence, Set, Tuple

import numpy as np
from scipy.special import stirling2

from ..perms import MAX_ITEMS, Permutation, check_n, enumerate_permutations


@dataclass(frozen=True)
class BucketRanking:
    buckets: Tuple[FrozenSet[int], ...]

    def __post_init__(self):
        buckets = tuple(frozenset(int(i) for i in b) for b in self.buckets)
        object.__setattr__(self, "buckets", buckets)
        if not buckets:
            raise ValueError("a bucket ranking needs at least one bucket")
        if any(len(b) == 0 for b in buckets):
            raise ValueError(f"empty bucket in {self.to_json()}")
        items = [i for b in buckets for i in b]
        if len(items) != len(set(items)):
            raise ValueError(f"buckets overlap in {self.to_json()}")
        if set(items) != set(range(1, len(items) + 1)):
            raise ValueError(f"buckets of {self.to_json()} do not cover 1..{len(items)}")

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.buckets)

    @property
    def k(self) -> int:
        return len(self.buckets)

    @classmethod
    def from_positions(cls, positions: Sequence[int]) -> "BucketRanking":
        """Build from 0-based bucket indices per item; indices are compacted, so gaps are allowed."""
        levels = sorted(set(int(p) for p in positions))
        return cls(tuple(
            frozenset(i + 1 for i, p in enumerate(positions) if p == level) for level in levels
        ))

    @classmethod
    def single_bucket(cls, n: int) -> "BucketRanking":
        return cls((frozenset(range(1, n + 1)),))

    def positions(self) -> np.ndarray:
        """0-based bucket index of each item."""
        pos = np.empty(self.n, dtype=np.int64)
        for level, bucket in enumerate(self.buckets):
            for item in bucket:
                pos[item - 1] = level
        return pos

    def to_json(self) -> List[List[int]]:
        return [sorted(b) for b in self.buckets]

    @classmethod
    def from_json(cls, data: Iterable[Iterable[int]]) -> "BucketRanking":
        return cls(tuple(frozenset(b) for b in data))

    def __str__(self) -> str:
        return "|".join(",".join(str(i) for i in sorted(b)) for b in self.buckets)


def from_permutation(sigma: Permutation) -> BucketRanking:
    """Singleton buckets in rank order."""
    return BucketRanking(tuple(frozenset((item,)) for item in sigma.order()))


def compatible_permutations(pi: BucketRanking) -> Set[Permutation]:
    """Linear extensions of the strict part of `pi`. Cost prod(|bucket|!)."""
    check_n(pi.n)
    per_bucket = [list(itertools.permutations(sorted(b))) for b in pi.buckets]
    out = set()
    for choice in itertools.product(*per_bucket):
        order = [item for block in choice for item in block]
        out.add(Permutation.from_order(order))
    return out


def n_compatible(pi: BucketRanking) -> int:
    return math.prod(math.factorial(len(b)) for b in pi.buckets)


def is_stricter(pi1: BucketRanking, pi2: BucketRanking) -> bool:
    """True iff every linear extension of pi1 is one of pi2.

    Equivalent pairwise test: every strict relation of pi2 holds strictly in pi1.
    """
    if pi1.n != pi2.n:
        raise ValueError(f"mismatched item counts: {pi1.n} vs {pi2.n}")
    p1 = pi1.positions()
    p2 = pi2.positions()
    before2 = p2[:, None] < p2[None, :]
    before1 = p1[:, None] < p1[None, :]
    return bool(np.all(before1[before2]))


def count_bucket_orders(n: int) -> int:
    """Number of ordered set partitions of n items: sum_k k! S(n, k)."""
    n = check_n(n)
    return int(sum(math.factorial(k) * int(stirling2(n, k, exact=True)) for k in range(1, n + 1)))


def _ordered_partitions(items: Tuple[int, ...]):
    if not items:
        yield ()
        return
    for size in range(1, len(items) + 1):
        for first in itertools.combinations(items, size):
            rest = tuple(i for i in items if i not in first)
            for tail in _ordered_partitions(rest):
                yield (frozenset(first),) + tail


def enumerate_bucket_orders(n: int, max_items: int = MAX_ITEMS) -> List[BucketRanking]:
    """Every bucket ranking of n items in a fixed deterministic order."""
    n = check_n(n, max_items)
    return [BucketRanking(parts) for parts in _ordered_partitions(tuple(range(1, n + 1)))]
