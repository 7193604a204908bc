from .smoothing import AttackConfig, draw_perturbations, rho_smoothed
from .saddle import (
    TRACE_COLUMNS,
    AttackResult,
    best_transfer,
    deviation_exact,
    estimate_breakdown,
    shrink_toward,
    transfer_endpoints,
    tv_gradient,
)
