"""Command line entry point: ``hetcascade <subcommand> [flags]``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import io
from .cascade import per_node_capacity
from .centrality import METRICS, all_metrics
from .config import ExperimentConfig, parse_key_values
from .experiments import EXPERIMENTS, load_dataset
from .features import InfectionModel, assign_features, edge_probabilities
from .graph import structural_summary
from .tim import select_seeds

DEFAULT_GENERATOR = "ws:n=1133,k=10,p=0.1,seed=0"


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", action="append", default=[], help="edge-list file (repeatable)")
    p.add_argument("--generator", action="append", default=[],
                   help="small-world spec, e.g. ws:n=5000,k=8,p=0.1,seed=0 (repeatable)")
    p.add_argument("--model", action="append", default=[],
                   help="constant[:c] | avg_s | i | is (repeatable)")
    p.add_argument("--runs", type=int, help="cascade runs per seed / realization")
    p.add_argument("--rng-seed", type=int)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--config", help="flat key=value config file; flags win")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hetcascade", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="structural summary of a graph")
    _common(p)

    p = sub.add_parser("centrality", help="write node_id,metric,score for the 12 metrics")
    _common(p)
    p.add_argument("--metrics", default=",".join(METRICS))

    p = sub.add_parser("capacity", help="single-seed spreading capacity of every node")
    _common(p)

    p = sub.add_parser("tim", help="RR-set seed selection")
    _common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--theta", type=int)
    p.add_argument("--epsilon", type=float)

    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} pipeline")
        _common(p)
        p.add_argument("--rounds", type=int)
        p.add_argument("--realizations", type=int)
        p.add_argument("--seed-policy")
        p.add_argument("--removal-strategy", action="append", default=[])
        p.add_argument("--removal-grid", help="comma-separated fractions starting at 0")
        p.add_argument("--tim-k", help="fraction:0.01 or count:100")
        p.add_argument("--theta-per-node", type=int)
        p.add_argument("--epsilon", type=float)
        p.add_argument("--coefficients", help="comma-separated subset of pearson,spearman,kendall")
    return parser


def experiment_config(args) -> ExperimentConfig:
    items: dict[str, str] = {}
    if args.config:
        items.update(parse_key_values(Path(args.config).read_text(encoding="utf-8")))
    datasets = args.graph + args.generator
    flags = {
        "datasets": ";".join(datasets) if datasets else None,
        "models": ",".join(args.model) if args.model else None,
        "runs_per_seed": args.runs,
        "rng_seed": args.rng_seed,
        "rounds": getattr(args, "rounds", None),
        "realizations": getattr(args, "realizations", None),
        "seed_policy": getattr(args, "seed_policy", None),
        "removal_strategies": ",".join(args.removal_strategy) if getattr(args, "removal_strategy", None) else None,
        "removal_grid": getattr(args, "removal_grid", None),
        "tim_k": getattr(args, "tim_k", None),
        "theta_per_node": getattr(args, "theta_per_node", None),
        "epsilon": getattr(args, "epsilon", None),
        "coefficients": getattr(args, "coefficients", None),
    }
    items.update({k: str(v) for k, v in flags.items() if v is not None})
    return ExperimentConfig.from_items(items)


def _single_graph(args):
    specs = args.graph + args.generator
    return load_dataset(specs[0] if specs else DEFAULT_GENERATOR)


def _features_and_p(args, g):
    seed = args.rng_seed or 0
    f = assign_features(g, seed)
    model = InfectionModel.parse(args.model[0] if args.model else "is")
    return f, edge_probabilities(g, f, model)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(message)s")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    if args.command in EXPERIMENTS:
        cfg = experiment_config(args)
        res = EXPERIMENTS[args.command](cfg)
        res.write(out)
        for fname in res.tables:
            print(out / fname)
        print(out / "manifest.txt")
        return 0

    name, g = _single_graph(args)
    if args.command == "stats":
        s = structural_summary(g)
        text = "".join(f"{k}={v}\n" for k, v in [("dataset", name), *vars(s).items()])
        sys.stdout.write(text)
        (out / "stats.txt").write_text(text, encoding="utf-8")
        return 0

    f, p = _features_and_p(args, g)
    io.write_features(out / "features.csv", f)
    io.write_edge_probabilities(out / "edge_probabilities.csv", p)
    if args.command == "centrality":
        wanted = [m.strip() for m in args.metrics.split(",") if m.strip()]
        scores = all_metrics(g, p, wanted)
        io.write_scores(out / "scores.csv", scores.values())
        print(out / "scores.csv")
    elif args.command == "capacity":
        cap = per_node_capacity(g, p, args.runs or 100, args.rng_seed or 0)
        io.write_capacity(out / "capacity.csv", cap)
        print(out / "capacity.csv")
    elif args.command == "tim":
        sel = select_seeds(g, p, args.k, theta=args.theta, epsilon=args.epsilon, rng_seed=args.rng_seed or 0)
        io.write_seeds(out / "seeds.csv", sel, g.degree)
        print(out / "seeds.csv")
    return 0
