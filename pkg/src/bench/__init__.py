from .specs import (
    ExperimentSpec,
    SpecValidationError,
    distribution_label,
    load_distribution,
    load_spec,
    parse_distribution,
    save_distribution,
)
from .experiments import (
    CURVE_COLUMNS,
    TRADEOFF_COLUMNS,
    UNBREAKABLE,
    attack_cell,
    cell_seeds,
    comparable_budget,
    curve_rows,
    default_tradeoff_distributions,
    median_run,
    run_breakdown_curve,
    run_tradeoff,
    tradeoff_rows,
)
