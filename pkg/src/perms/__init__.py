from .core import (
    MAX_ITEMS,
    Permutation,
    adjacent_swap,
    all_ranks,
    check_n,
    enumerate_permutations,
    n_perms,
    perm_index,
    permutation_at,
    reverse,
)
from .metrics import (
    METRICS,
    distance_matrix,
    expected_distances,
    get_metric,
    kendall_tau,
    n_pairs,
    spearman_footrule,
    spearman_rho,
)
