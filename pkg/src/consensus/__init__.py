from .medians import (
    MedianResult,
    borda,
    borda_ranks,
    kemeny_median,
    kemeny_median_sst,
    median_indices,
    median_ranks,
    metric_median,
)
from .loss import accuracy_of_location, loss
from .statistics import (
    BordaStatistic,
    ConstantBucketStatistic,
    KemenyStatistic,
    MedianStatistic,
    MergeStatistic,
    Statistic,
    make_statistic,
)
