#!/usr/bin/env python3
"""
Robust consensus ranking: command-line entry point.

Subcommands: median, distance, bounds, attack, merge, tradeoff, curve.
"""

import argparse
import os
import sys
from pathlib import Path

import yaml

from src.artifacts.io import config_hash, save_json, write_csv
from src.attack import TRACE_COLUMNS, AttackConfig, estimate_breakdown
from src.bench import (
    ExperimentSpec,
    SpecValidationError,
    default_tradeoff_distributions,
    distribution_label,
    load_distribution,
    load_spec,
    parse_distribution,
    run_breakdown_curve,
    run_tradeoff,
)
from src.breakdown import BUDGET_UNIT, breakdown_curve_bounds
from src.buckets import BucketRanking, hausdorff_half, hausdorff_ns
from src.consensus.statistics import MEDIAN_METRICS
from src.consensus import borda, kemeny_median_sst, loss, make_statistic, metric_median
from src.dists import is_sst, pairwise_matrix
from src.merge import merge_path
from src.perms import METRICS, Permutation

OUTPUT_ENV = "ROBUST_CONSENSUS_OUTPUT_DIR"


def load_config(config_path: str = "configs/defaults.yaml"):
    """Load configuration from YAML file."""
    with open(config_path, 'r') as f:
        return yaml.safe_load(f)


def say(args, message: str) -> None:
    if not args.quiet:
        print(message)


def output_dir(args, config) -> str:
    if args.out:
        return args.out
    return os.environ.get(OUTPUT_ENV) or config.get("output_dir", "artifacts")


def distribution_spec(args, config) -> dict:
    n = args.n or config["n_items"]
    family = args.family
    if family in ("plackett_luce", "pl"):
        return {"kind": "plackett_luce", "n": n, "seed": args.seed if args.seed is not None else config["seed"]}
    if family in ("uniform", "dense"):
        return {"kind": "uniform", "n": n}
    eta = args.eta if args.eta is not None else config["families"]["eta"]
    gap = args.gap if args.gap is not None else config["families"]["gap"]
    return {"kind": family, "n": n, "eta": eta, "gap": gap}


def resolve_distribution(args, config):
    if args.dist:
        return load_distribution(args.dist), Path(args.dist).name
    spec = distribution_spec(args, config)
    return parse_distribution(spec), distribution_label(spec)


def attack_section(args, config) -> dict:
    section = dict(config["attack"])
    for key in ("gamma", "steps"):
        if getattr(args, key) is not None:
            section[key] = getattr(args, key)
    return section


def parse_ranking(text: str):
    """'2,1,3' is a permutation's rank vector; '1|2,3' a bucket ranking, best bucket first."""
    if "|" in text:
        return BucketRanking.from_json([[int(i) for i in b.split(",")] for b in text.split("|")])
    return Permutation.from_json([int(r) for r in text.split(",")])


def cmd_median(args, config):
    p, label = resolve_distribution(args, config)
    say(args, f"📊 {label}, n={p.n}")
    for name in METRICS:
        result = metric_median(p, name)
        flag = "" if result.is_unique else f" ({len(result.argmin_set)} minimizers)"
        print(f"  {name:>13} median {result.median}  objective {result.objective:.6f}{flag}")
    print(f"  {'borda':>13} median {borda(p)}")
    P = pairwise_matrix(p)
    if is_sst(P, strict=True):
        print(f"  strict SST: Kemeny by pairwise counting {kemeny_median_sst(P)}")
    else:
        say(args, "⚠️ not strictly SST; pairwise fast path skipped")


def cmd_distance(args, config):
    a, b = parse_ranking(args.a), parse_ranking(args.b)
    if isinstance(a, Permutation) and isinstance(b, Permutation):
        for name, fn in METRICS.items():
            print(f"  {name:>13} {fn(a, b):.6f}")
        return
    if isinstance(a, Permutation):
        a = BucketRanking.from_json([[i] for i in a.order()])
    if isinstance(b, Permutation):
        b = BucketRanking.from_json([[i] for i in b.order()])
    print(f"  hausdorff_ns(a, b) {hausdorff_ns(a, b):.6f}")
    print(f"  hausdorff_ns(b, a) {hausdorff_ns(b, a):.6f}")
    print(f"  hausdorff_half     {hausdorff_half(a, b):.6f}")


def cmd_bounds(args, config):
    p, label = resolve_distribution(args, config)
    deltas = [args.delta] if args.delta is not None else config["curve"]["deltas"]
    curve = breakdown_curve_bounds(p, deltas, "kendall", args.metric)
    settings = {"distribution": label, "metric": args.metric, "deltas": curve.deltas, "unit": BUDGET_UNIT}
    digest = config_hash(settings)
    path = Path(output_dir(args, config)) / f"bounds_{digest}.csv"
    write_csv(str(path), curve.rows(), ["delta", "eps_lower", "eps_upper", "condition_ok"],
              {"config_hash": digest, "seed": "none", "unit": BUDGET_UNIT})
    save_json(str(path.with_name(f"bounds_{digest}_config.json")), settings)
    for row in curve.rows():
        say(args, f"📊 delta={row['delta']:.4f} lower={row['eps_lower']} upper={row['eps_upper']}")
    say(args, f"💾 saved {path}")


def cmd_attack(args, config):
    p, label = resolve_distribution(args, config)
    theta = args.theta if args.theta is not None else config["merge"]["theta"]
    statistic = make_statistic(args.statistic, theta, config["merge"]["median"])
    delta = args.delta if args.delta is not None else config["tradeoff"]["delta"]
    seed = args.seed if args.seed is not None else config["seed"]
    cfg = AttackConfig.from_dict(attack_section(args, config), delta=delta, seed=seed)
    say(args, f"🔄 attacking {statistic.label} on {label} at delta={delta:.4f}")
    result = estimate_breakdown(p, statistic, cfg, verbose=args.verbose)
    if result.unbreakable:
        print(f"📊 {result.status}: achieved deviation {result.achieved_deviation:.4f} < {delta:.4f}")
    else:
        print(f"📊 eps_hat (TV) {result.eps_hat:.6f}  L1 {result.eps_hat_l1:.6f}  "
              f"achieved {result.achieved_deviation:.4f}  lambda {result.lambda_final:.3f}")
    if args.trace:
        rows = [dict(zip(TRACE_COLUMNS, (int(r[0]), *map(float, r[1:])))) for r in result.trace]
        write_csv(args.trace, rows, list(TRACE_COLUMNS), {"config_hash": config_hash(cfg.to_dict()), "seed": seed})
        say(args, f"💾 trace saved to {args.trace}")


def cmd_merge(args, config):
    p, label = resolve_distribution(args, config)
    theta = args.theta if args.theta is not None else config["merge"]["theta"]
    median_metric = MEDIAN_METRICS[config["merge"]["median"]]
    median = metric_median(p, median_metric).median
    P = pairwise_matrix(p)
    say(args, f"📊 {label}: median {median}, theta={theta}")
    for kind in ("naive", "downward"):
        path = list(merge_path(median, P, theta, kind))
        final = path[-1]
        print(f"  {kind:>8}: {' -> '.join(str(pi) for pi in path)}  loss {loss(final, p):.4f}")


def cmd_tradeoff(args, config):
    tcfg = config["tradeoff"]
    n = args.n or config["n_items"]
    seed = args.seed if args.seed is not None else config["seed"]
    eta = args.eta if args.eta is not None else config["families"]["eta"]
    gap = args.gap if args.gap is not None else config["families"]["gap"]
    theta = args.theta if args.theta is not None else config["merge"]["theta"]
    delta = args.delta if args.delta is not None else tcfg["delta"]
    distributions = default_tradeoff_distributions(n, eta, gap, tcfg["pl_count"], seed)
    statistics = ["kemeny", f"downward_merge({theta:g})"]
    run_tradeoff(distributions, statistics, attack_section(args, config), delta, tcfg["runs"], seed,
                 theta, config["merge"]["median"], output_dir(args, config), args.quiet)


def cmd_curve(args, config):
    if args.spec:
        spec = load_spec(args.spec)
        if args.out or os.environ.get(OUTPUT_ENV):
            spec.output_dir = output_dir(args, config)
    else:
        spec = ExperimentSpec.from_dict({
            "distribution": distribution_spec(args, config),
            "statistic": args.statistic,
            "deltas": [args.delta] if args.delta is not None else config["curve"]["deltas"],
            "attack": attack_section(args, config),
            "runs": config["tradeoff"]["runs"],
            "seed": args.seed if args.seed is not None else config["seed"],
            "output_dir": output_dir(args, config),
            "merge_median": config["merge"]["median"],
        })
    theta = args.theta if args.theta is not None else config["merge"]["theta"]
    run_breakdown_curve(spec, theta, args.quiet)


COMMANDS = {
    "median": cmd_median,
    "distance": cmd_distance,
    "bounds": cmd_bounds,
    "attack": cmd_attack,
    "merge": cmd_merge,
    "tradeoff": cmd_tradeoff,
    "curve": cmd_curve,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Robust consensus ranking toolkit")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", default="configs/defaults.yaml", help="Config file path")
    parser.add_argument("--n", type=int, help="Number of items")
    parser.add_argument("--seed", type=int, help="Root random seed")
    parser.add_argument("--family", default="bucket-ish",
                        help="uniform-ish | pointmass-ish | bucket-ish | plackett_luce | uniform")
    parser.add_argument("--eta", type=float, help="Mixing weight of the hand-crafted families")
    parser.add_argument("--gap", type=float, help="Probability gap of the bucket-ish family")
    parser.add_argument("--dist", help="Distribution JSON file (overrides --family)")
    parser.add_argument("--spec", help="Experiment spec JSON file (curve)")
    parser.add_argument("--statistic", default="kemeny",
                        help="kemeny | borda | footrule_median | naive_merge(θ) | downward_merge(θ) | constant_bucket")
    parser.add_argument("--metric", default="kendall", choices=sorted(METRICS), help="Median metric for bounds")
    parser.add_argument("--theta", type=float, help="Merge threshold on |P - 1/2|")
    parser.add_argument("--delta", type=float, help="Target deviation")
    parser.add_argument("--gamma", type=float, help="Attack smoothing scale")
    parser.add_argument("--steps", type=int, help="Attack iterations")
    parser.add_argument("--a", help="First ranking for distance, e.g. 2,1,3 or 1|2,3")
    parser.add_argument("--b", help="Second ranking for distance")
    parser.add_argument("--trace", help="Write the attack trace CSV here")
    parser.add_argument("--out", help=f"Output directory (else ${OUTPUT_ENV}, else config)")
    parser.add_argument("--verbose", action="store_true", help="Print attack progress")
    parser.add_argument("--quiet", action="store_true", help="Suppress status lines")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        if args.command == "distance" and not (args.a and args.b):
            raise ValueError("distance needs --a and --b")
        COMMANDS[args.command](args, config)
    except SpecValidationError as e:
        print(f"❌ invalid spec: {e}")
        return 2
    except ValueError as e:
        print(f"❌ {e}")
        return 2
    except OSError as e:
        print(f"❌ cannot read {e.filename}: {e.strerror}")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
