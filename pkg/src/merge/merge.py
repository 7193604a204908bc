"""
Merge statistics: start from a ranking median seen as singleton buckets and
repeatedly merge runs of adjacent buckets whose items are close enough to
pairwise indifference.

Bucket indices in the public functions are 1-based like item ids.
"""

from __future__ import annotations

from typing import Iterator, List, Tuple

import numpy as np

from ..buckets import BucketRanking, from_permutation
from ..dists import PairwiseMatrix
from ..perms import Permutation

THETA_TOL = 1e-9
MERGE_KINDS = ("naive", "downward")


def check_theta(theta: float) -> float:
    theta = float(theta)
    if not 0.0 <= theta <= 0.5:
        raise ValueError(f"threshold theta={theta} must lie in [0, 0.5]")
    return theta


def _span_items(pi: BucketRanking, i: int, j: int) -> np.ndarray:
    return np.array(sorted(item - 1 for b in pi.buckets[i - 1:j] for item in b), dtype=np.int64)


def deviation_bar(P: PairwiseMatrix, pi: BucketRanking, i: int, j: int) -> float:
    """Largest |P_ll' - 1/2| over items l, l' in buckets i..j."""
    if P.n != pi.n:
        raise ValueError(f"mismatched item counts: {P.n} vs {pi.n}")
    if not 1 <= i <= j <= pi.k:
        raise ValueError(f"bucket span ({i}, {j}) out of range for {pi.k} buckets")
    items = _span_items(pi, i, j)
    return float(P.deviation()[np.ix_(items, items)].max())


def acceptable_spans(P: PairwiseMatrix, pi: BucketRanking, theta: float) -> List[Tuple[int, int, float]]:
    """(i, j, deviation) for every span i < j whose deviation is within theta."""
    out = []
    for i in range(1, pi.k):
        for j in range(i + 1, pi.k + 1):
            dev = deviation_bar(P, pi, i, j)
            if dev <= theta + THETA_TOL:
                out.append((i, j, dev))
    return out


def merge_span(pi: BucketRanking, i: int, j: int) -> BucketRanking:
    merged = frozenset().union(*pi.buckets[i - 1:j])
    return BucketRanking(pi.buckets[:i - 1] + (merged,) + pi.buckets[j:])


def _select(spans: List[Tuple[int, int, float]], kind: str) -> Tuple[int, int]:
    # lexicographic (i, j) breaks ties since spans are generated in that order
    if kind == "naive":
        best = min(spans, key=lambda s: s[2])
    else:
        best = max(spans, key=lambda s: s[2])
    return best[0], best[1]


def merge_path(sigma_med: Permutation, P: PairwiseMatrix, theta: float, kind: str = "downward") -> Iterator[BucketRanking]:
    """Yield the starting singleton order and every bucket ranking after each merge."""
    theta = check_theta(theta)
    if kind not in MERGE_KINDS:
        raise ValueError(f"unknown merge kind {kind!r}; expected one of {MERGE_KINDS}")
    if sigma_med.n != P.n:
        raise ValueError(f"mismatched item counts: {sigma_med.n} vs {P.n}")
    pi = from_permutation(sigma_med)
    yield pi
    while True:
        spans = acceptable_spans(P, pi, theta)
        if not spans:
            return
        i, j = _select(spans, kind)
        pi = merge_span(pi, i, j)
        yield pi


def naive_merge(sigma_med: Permutation, P: PairwiseMatrix, theta: float) -> BucketRanking:
    """Merge the most indifferent acceptable span first."""
    *_, last = merge_path(sigma_med, P, theta, "naive")
    return last


def downward_merge(sigma_med: Permutation, P: PairwiseMatrix, theta: float) -> BucketRanking:
    """Merge the least indifferent span among the acceptable ones first."""
    *_, last = merge_path(sigma_med, P, theta, "downward")
    return last


def merge(sigma_med: Permutation, P: PairwiseMatrix, theta: float, kind: str = "downward") -> BucketRanking:
    *_, last = merge_path(sigma_med, P, theta, kind)
    return last
