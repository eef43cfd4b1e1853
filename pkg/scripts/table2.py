"""Capacity-vs-centrality association under the four infection-rate models."""

from _common import parser, setup

from hetcascade.config import ExperimentConfig
from hetcascade.experiments import run, table2_summary

p = parser(__doc__)
p.add_argument("--runs", type=int, default=100)
args = p.parse_args()
datasets, out = setup(args, "table2")
cfg = ExperimentConfig(datasets=datasets, runs_per_seed=args.runs, rng_seed=args.rng_seed)
res = run("exp-table2", cfg, out)
print(f"{'model':<14}{'pearson':>9}{'spearman':>10}{'kendall':>9}{'top10%':>8}")
for model, v in table2_summary(res).items():
    print(f"{model:<14}{v['pearson']:>9.3f}{v['spearman']:>10.3f}{v['kendall']:>9.3f}{v['top10_precision']:>8.3f}")
print(f"tables in {out}")
