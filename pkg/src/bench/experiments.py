"""
Experiment runners: breakdown curves and loss / robustness tradeoffs.

Every (distribution, statistic, delta) cell gets its own seeds derived from
the root seed, so cells are independent and re-runs are byte-identical.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..artifacts.io import config_hash, save_json, write_csv
from ..attack import AttackConfig, AttackResult, estimate_breakdown
from ..breakdown import BUDGET_UNIT, attainable_deltas, epsilon_minus, epsilon_plus
from ..breakdown.bounds import MAX_LOWER_ITEMS, MAX_UPPER_ITEMS
from ..consensus import MedianStatistic, Statistic, loss, make_statistic
from ..dists import RankingDistribution
from ..types import CurveRow, TradeoffRow
from .specs import ExperimentSpec, distribution_label, parse_distribution

UNBREAKABLE = "unbreakable"
CURVE_COLUMNS = [
    "delta", "eps_lower", "eps_upper", "condition_ok",
    "eps_hat", "eps_hat_l1", "achieved_deviation", "unbreakable_runs",
]
TRADEOFF_COLUMNS = [
    "distribution", "statistic", "output", "loss", "accuracy",
    "eps_hat", "eps_hat_l1", "achieved_deviation", "unbreakable_runs",
]


def cell_seeds(root: int, cell: int, runs: int) -> List[int]:
    """Independent per-run seeds for one experiment cell."""
    return [int(np.random.SeedSequence([root, cell, r]).generate_state(1)[0]) for r in range(runs)]


def budget_key(result: AttackResult) -> float:
    return math.inf if result.unbreakable else float(result.eps_hat)


def comparable_budget(eps: Optional[float]) -> float:
    """Unbreakable counts as the largest possible TV budget."""
    return 1.0 if eps is None else float(eps)


def median_run(results: Sequence[AttackResult]) -> AttackResult:
    """Lower median by budget, unbreakable ordered above every finite value."""
    ordered = sorted(results, key=budget_key)
    return ordered[(len(ordered) - 1) // 2]


def attack_cell(
    p: RankingDistribution,
    statistic: Statistic,
    base: AttackConfig,
    seeds: Sequence[int],
    quiet: bool = True,
) -> Tuple[AttackResult, int]:
    """Repeat the attack over seeds; return the median run and the unbreakable count."""
    results = []
    for seed in seeds:
        cfg = AttackConfig.from_dict(base.to_dict(), seed=seed)
        result = estimate_breakdown(p, statistic, cfg)
        if result.status == "diverged" and not quiet:
            print(f"⚠️ attack diverged (seed {seed}, delta {cfg.delta:.4f})")
        results.append(result)
    return median_run(results), sum(r.unbreakable for r in results)


def _budget_cell(value: Optional[float], unbreakable: bool):
    return UNBREAKABLE if unbreakable else value


def _bounds_for(p: RankingDistribution, statistic: Statistic, delta: float) -> Tuple[object, object, bool]:
    """Exact bounds when the statistic is a ranking median; 'na' otherwise."""
    if not isinstance(statistic, MedianStatistic):
        return None, None, False
    lower = None
    if p.n <= MAX_LOWER_ITEMS:
        lb = epsilon_minus(p, delta, "kendall", statistic.metric)
        lower = _budget_cell(lb.value, lb.unbreakable)
    if statistic.metric != "kendall" or p.n > MAX_UPPER_ITEMS:
        return lower, None, False
    ub = epsilon_plus(p, delta)
    if ub.unbreakable:
        return lower, UNBREAKABLE, False
    return lower, (ub.value if ub.condition_ok else None), bool(ub.condition_ok)


def curve_rows(
    p: RankingDistribution,
    statistic: Statistic,
    deltas: Sequence[float],
    base: AttackConfig,
    runs: int,
    seed: int,
    quiet: bool = True,
) -> List[CurveRow]:
    rows: List[CurveRow] = []
    for cell, delta in enumerate(deltas):
        lower, upper, ok = _bounds_for(p, statistic, delta)
        cfg = AttackConfig.from_dict(base.to_dict(), delta=float(delta))
        best, n_unbreakable = attack_cell(p, statistic, cfg, cell_seeds(seed, cell, runs), quiet)
        rows.append(CurveRow(
            delta=float(delta),
            eps_lower=lower,
            eps_upper=upper,
            condition_ok=ok,
            eps_hat=_budget_cell(best.eps_hat, best.unbreakable),
            eps_hat_l1=_budget_cell(best.eps_hat_l1, best.unbreakable),
            achieved_deviation=None if best.unbreakable else best.achieved_deviation,
            unbreakable_runs=n_unbreakable,
        ))
        if not quiet:
            shown = UNBREAKABLE if best.unbreakable else f"{best.eps_hat:.4f}"
            print(f"📊 delta={delta:.4f} eps_hat={shown} eps_upper={upper}")
    return rows


def _artifact_paths(output_dir: str, command: str, digest: str) -> Tuple[Path, Path]:
    base = Path(output_dir) / f"{command}_{digest}"
    return base.with_suffix(".csv"), Path(f"{base}_config.json")


def run_breakdown_curve(spec: ExperimentSpec, theta: float = 0.05, quiet: bool = False) -> Tuple[List[CurveRow], Path]:
    """Bounds and empirical breakdown for one distribution and statistic over a delta grid."""
    p = spec.build_distribution()
    statistic = spec.build_statistic(theta)
    deltas = spec.deltas if spec.deltas is not None else attainable_deltas(p.n)
    base = spec.attack_config(0.0, spec.seed)

    config = spec.to_dict()
    config.update({"deltas": [float(d) for d in deltas], "theta": theta, "budget_unit": BUDGET_UNIT})
    digest = config_hash(config)
    csv_path, config_path = _artifact_paths(spec.output_dir, "curve", digest)

    if not quiet:
        print(f"🔄 breakdown curve: {statistic.label} on {distribution_label(spec.distribution)}, {len(deltas)} deltas")
    rows = curve_rows(p, statistic, deltas, base, spec.runs, spec.seed, quiet)
    write_csv(str(csv_path), rows, CURVE_COLUMNS, {
        "config_hash": digest, "seed": spec.seed, "statistic": statistic.label,
        "eps_hat_unit": "tv", "bounds_unit": BUDGET_UNIT,
    })
    save_json(str(config_path), config)
    if not quiet:
        print(f"💾 saved {csv_path}")
    return rows, csv_path


def default_tradeoff_distributions(n: int, eta: float, gap: float, pl_count: int, seed: int) -> List[Dict]:
    specs = [
        {"kind": "uniform-ish", "n": n, "eta": eta},
        {"kind": "pointmass-ish", "n": n, "eta": eta},
        {"kind": "bucket-ish", "n": n, "eta": eta, "gap": gap},
        {"kind": "bucket-ish", "n": n, "eta": eta, "gap": gap / 10.0},
    ]
    for k in range(pl_count):
        specs.append({"kind": "plackett_luce", "n": n, "seed": seed + k})
    return specs


def tradeoff_rows(
    distributions: Sequence[Dict],
    statistics: Sequence[str],
    base: AttackConfig,
    runs: int,
    seed: int,
    theta: float = 0.05,
    merge_median: str = "kemeny",
    quiet: bool = True,
) -> List[TradeoffRow]:
    rows: List[TradeoffRow] = []
    cell = 0
    for d_idx, dist_spec in enumerate(distributions):
        p = parse_distribution(dist_spec, f"distributions[{d_idx}]")
        label = distribution_label(dist_spec)
        for name in statistics:
            statistic = make_statistic(name, theta, merge_median)
            output = statistic(p)
            best, n_unbreakable = attack_cell(p, statistic, base, cell_seeds(seed, cell, runs), quiet)
            cell += 1
            value = loss(output, p)
            rows.append(TradeoffRow(
                distribution=label,
                statistic=statistic.label,
                output=str(output),
                loss=value,
                accuracy=1.0 - value,
                eps_hat=_budget_cell(best.eps_hat, best.unbreakable),
                eps_hat_l1=_budget_cell(best.eps_hat_l1, best.unbreakable),
                achieved_deviation=None if best.unbreakable else best.achieved_deviation,
                unbreakable_runs=n_unbreakable,
            ))
            if not quiet:
                shown = UNBREAKABLE if best.unbreakable else f"{best.eps_hat:.4f}"
                print(f"📊 {label} {statistic.label}: loss={value:.4f} eps_hat={shown}")
    return rows


def run_tradeoff(
    distributions: Sequence[Dict],
    statistics: Sequence[str],
    attack: Dict,
    delta: float,
    runs: int = 5,
    seed: int = 0,
    theta: float = 0.05,
    merge_median: str = "kemeny",
    output_dir: str = "artifacts",
    quiet: bool = False,
) -> Tuple[List[TradeoffRow], Path]:
    """Loss and empirical breakdown at a fixed delta for every distribution x statistic pair."""
    base = AttackConfig.from_dict(attack, delta=delta, seed=seed)
    config = {
        "distributions": list(distributions), "statistics": list(statistics),
        "attack": base.to_dict(), "delta": delta, "runs": runs, "seed": seed,
        "theta": theta, "merge_median": merge_median,
    }
    digest = config_hash(config)
    csv_path, config_path = _artifact_paths(output_dir, "tradeoff", digest)

    if not quiet:
        print(f"🔄 tradeoff: {len(distributions)} distributions x {len(statistics)} statistics at delta={delta:.4f}")
    rows = tradeoff_rows(distributions, statistics, base, runs, seed, theta, merge_median, quiet)
    write_csv(str(csv_path), rows, TRADEOFF_COLUMNS, {
        "config_hash": digest, "seed": seed, "delta": format(delta, ".12g"), "eps_hat_unit": "tv",
    })
    save_json(str(config_path), config)
    if not quiet:
        print(f"💾 saved {csv_path}")
    return rows, csv_path
