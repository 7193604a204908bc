from typing import Dict, Optional, TypedDict, Any, Union

# "unbreakable" or "na" stand in for a budget when no attack applies
Budget = Union[float, str, None]


class CurveRow(TypedDict):
    delta: float
    eps_lower: Budget
    eps_upper: Budget
    condition_ok: bool
    eps_hat: Budget
    eps_hat_l1: Budget
    achieved_deviation: Optional[float]
    unbreakable_runs: int


class TradeoffRow(TypedDict):
    distribution: str
    statistic: str
    output: str
    loss: float
    accuracy: float
    eps_hat: Budget
    eps_hat_l1: Budget
    achieved_deviation: Optional[float]
    unbreakable_runs: int


DistributionSpec = Dict[str, Any]
