from .orders import (
    BucketRanking,
    compatible_permutations,
    count_bucket_orders,
    enumerate_bucket_orders,
    from_permutation,
    is_stricter,
    n_compatible,
)
from .hausdorff import (
    VARIANTS,
    batch_hausdorff,
    hausdorff,
    hausdorff_half,
    hausdorff_half_indicators,
    hausdorff_half_sets,
    hausdorff_ns,
    hausdorff_oracle,
    mean_ranks,
    profile,
)
