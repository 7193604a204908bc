"""
Permutations of [n] in rank-vector form and a fixed indexation of S_n.

Item ids are 1-based. `ranks[i]` is the rank of item i+1, rank 1 being the
most preferred. Permutation indices follow the lexicographic order of rank
vectors, so `enumerate_permutations(n)[k]` has index k.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

MAX_ITEMS = 8


def check_n(n: int, max_items: int = MAX_ITEMS) -> int:
    """Validate an item count for dense enumeration of S_n."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ValueError(f"item count must be an integer, got {n!r}")
    if not 1 <= n <= max_items:
        raise ValueError(f"item count n={n} out of range [1, {max_items}]")
    return int(n)


@dataclass(frozen=True)
class Permutation:
    ranks: Tuple[int, ...]

    def __post_init__(self):
        ranks = tuple(int(r) for r in self.ranks)
        object.__setattr__(self, "ranks", ranks)
        if len(ranks) < 1:
            raise ValueError("a permutation needs at least one item")
        if sorted(ranks) != list(range(1, len(ranks) + 1)):
            raise ValueError(f"ranks {ranks} are not a bijection on 1..{len(ranks)}")

    @property
    def n(self) -> int:
        return len(self.ranks)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "Permutation":
        """Build from the item ids listed best first, e.g. (3, 1, 2)."""
        ranks = [0] * len(order)
        for r, item in enumerate(order, start=1):
            if not 1 <= item <= len(order):
                raise ValueError(f"item id {item} out of range in order {tuple(order)}")
            ranks[item - 1] = r
        return cls(tuple(ranks))

    def order(self) -> Tuple[int, ...]:
        """Item ids sorted by rank, best first."""
        return tuple(int(i) + 1 for i in np.argsort(self.ranks, kind="stable"))

    def to_array(self) -> np.ndarray:
        return np.asarray(self.ranks, dtype=np.int64)

    def to_json(self) -> List[int]:
        return list(self.ranks)

    @classmethod
    def from_json(cls, data: Sequence[int]) -> "Permutation":
        return cls(tuple(data))

    def __str__(self) -> str:
        return "(" + ",".join(str(r) for r in self.ranks) + ")"


@lru_cache(maxsize=None)
def _enumerate(n: int) -> Tuple[Permutation, ...]:
    return tuple(Permutation(p) for p in itertools.permutations(range(1, n + 1)))


def enumerate_permutations(n: int) -> List[Permutation]:
    """All n! permutations in lexicographic order of rank vectors (cost O(n!·n))."""
    return list(_enumerate(check_n(n)))


@lru_cache(maxsize=None)
def all_ranks(n: int) -> np.ndarray:
    """Read-only (n!, n) array of rank vectors, row k = permutation with index k."""
    n = check_n(n)
    ranks = np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int64).reshape(-1, n)
    ranks.setflags(write=False)
    return ranks


def n_perms(n: int) -> int:
    return math.factorial(check_n(n))


def perm_index(sigma: Permutation) -> int:
    """Lexicographic index of the rank vector (Lehmer code)."""
    ranks = sigma.ranks
    n = len(ranks)
    idx = 0
    for i, r in enumerate(ranks):
        smaller_after = sum(1 for s in ranks[i + 1:] if s < r)
        idx += smaller_after * math.factorial(n - 1 - i)
    return idx


def permutation_at(n: int, index: int) -> Permutation:
    """Inverse of `perm_index`."""
    n = check_n(n)
    if not 0 <= index < math.factorial(n):
        raise ValueError(f"permutation index {index} out of range for n={n}")
    available = list(range(1, n + 1))
    ranks = []
    for i in range(n):
        f = math.factorial(n - 1 - i)
        digit, index = divmod(index, f)
        ranks.append(available.pop(digit))
    return Permutation(tuple(ranks))


def reverse(sigma: Permutation) -> Permutation:
    """Order reversal: ranks'[i] = n + 1 - ranks[i]."""
    n = sigma.n
    return Permutation(tuple(n + 1 - r for r in sigma.ranks))


def adjacent_swap(sigma: Permutation, rank: int = 1) -> Permutation:
    """Exchange the items sitting at ranks `rank` and `rank + 1`."""
    if not 1 <= rank < sigma.n:
        raise ValueError(f"no adjacent transposition at rank {rank} for n={sigma.n}")
    ranks = list(sigma.ranks)
    a = ranks.index(rank)
    b = ranks.index(rank + 1)
    ranks[a], ranks[b] = rank + 1, rank
    return Permutation(tuple(ranks))
