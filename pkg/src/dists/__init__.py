from .distributions import (
    RankingDistribution,
    mixture,
    point_mass,
    relabel_items,
    total_variation,
    uniform,
)
from .pairwise import PAIR_TOL, PairwiseMatrix, is_sst, kemeny_objective, pairwise_l1, pairwise_matrix
from .families import (
    DEFAULT_ETA,
    DEFAULT_GAP,
    NAMED_KINDS,
    make_named,
    plackett_luce,
    random_plackett_luce,
    random_plackett_luce_weights,
)
