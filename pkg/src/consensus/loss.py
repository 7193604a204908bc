"""Expected distance of a bucket-ranking output to the distribution it summarizes."""

import numpy as np

from ..buckets import BucketRanking, batch_hausdorff
from ..dists import RankingDistribution
from ..perms import all_ranks


def loss(t_output: BucketRanking, p: RankingDistribution) -> float:
    """E_p of the 1/2-symmetric Hausdorff distance between t_output and the sampled ranking."""
    if t_output.n != p.n:
        raise ValueError(f"mismatched item counts: {t_output.n} vs {p.n}")
    distances = batch_hausdorff(t_output.positions(), all_ranks(p.n) - 1, "half")
    return float(distances @ p.probs)


def accuracy_of_location(t_output: BucketRanking, p: RankingDistribution) -> float:
    # metrics are normalized, so the maximal distance is 1
    return 1.0 - loss(t_output, p)
