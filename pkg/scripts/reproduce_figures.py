"""Run the standard experiment presets end to end and write their CSV tables."""

import argparse
import sys
from pathlib import Path

# Add project root to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from main import load_config
from src.artifacts.io import config_hash, save_json, write_csv
from src.bench import ExperimentSpec, default_tradeoff_distributions, run_breakdown_curve, run_tradeoff
from src.breakdown import BUDGET_UNIT, breakdown_curve_bounds
from src.dists import random_plackett_luce


def median_bounds(config, out_dir: str):
    """Lower bounds for Kemeny, Borda and footrule medians plus the Kemeny upper bound."""
    n = config["n_items"]
    p = random_plackett_luce(n, config["seed"])
    rows = []
    for metric, label in (("kendall", "kemeny"), ("spearman_rho", "borda"), ("footrule", "footrule_median")):
        curve = breakdown_curve_bounds(p, None, "kendall", metric)
        for row in curve.rows():
            rows.append({"median": label, **row})
    settings = {"n": n, "seed": config["seed"], "family": "plackett_luce", "unit": BUDGET_UNIT}
    digest = config_hash(settings)
    path = Path(out_dir) / f"median_bounds_{digest}.csv"
    write_csv(str(path), rows, ["median", "delta", "eps_lower", "eps_upper", "condition_ok"],
              {"config_hash": digest, "seed": config["seed"], "unit": BUDGET_UNIT})
    save_json(str(path.with_name(f"median_bounds_{digest}_config.json")), settings)
    print(f"💾 median bounds → {path}")


def curves(config, out_dir: str, attack: dict, runs: int):
    n = config["n_items"]
    fam = config["families"]
    for kind in ("uniform-ish", "bucket-ish"):
        for statistic in ("kemeny", f"downward_merge({config['merge']['theta']:g})"):
            spec = ExperimentSpec.from_dict({
                "distribution": {"kind": kind, "n": n, "eta": fam["eta"], "gap": fam["gap"]},
                "statistic": statistic,
                "deltas": config["curve"]["deltas"],
                "attack": attack,
                "runs": runs,
                "seed": config["seed"],
                "output_dir": out_dir,
                "merge_median": config["merge"]["median"],
            })
            run_breakdown_curve(spec, config["merge"]["theta"])


def tradeoff(config, out_dir: str, attack: dict, runs: int):
    tcfg = config["tradeoff"]
    theta = config["merge"]["theta"]
    distributions = default_tradeoff_distributions(
        config["n_items"], config["families"]["eta"], config["families"]["gap"], tcfg["pl_count"], config["seed"]
    )
    run_tradeoff(distributions, ["kemeny", f"downward_merge({theta:g})"], attack, tcfg["delta"], runs,
                 config["seed"], theta, config["merge"]["median"], out_dir)


def main():
    parser = argparse.ArgumentParser(description="Reproduce breakdown curves and tradeoff tables")
    parser.add_argument("--config", default="configs/defaults.yaml")
    parser.add_argument("--out", default=None, help="Output directory (default: config output_dir)")
    parser.add_argument("--quick", action="store_true", help="Fewer attack steps and runs")
    args = parser.parse_args()

    config = load_config(args.config)
    out_dir = args.out or config["output_dir"]
    attack = dict(config["attack"])
    runs = config["tradeoff"]["runs"]
    if args.quick:
        attack["steps"] = 300
        runs = 1
        print("⚠️ quick mode: 300 steps, 1 run per cell")

    median_bounds(config, out_dir)
    curves(config, out_dir, attack, runs)
    tradeoff(config, out_dir, attack, runs)
    print("✅ done")


if __name__ == "__main__":
    main()
