from .bounds import (
    BUDGET_UNIT,
    BoundResult,
    BreakdownCurve,
    BreakdownQuery,
    attainable_deltas,
    breakdown_curve_bounds,
    epsilon_minus,
    epsilon_plus,
    reverse_attack,
)
