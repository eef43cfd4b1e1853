"""Correlation of single-seed capacity with own and neighbor influence/susceptibility."""

from _common import parser, setup

from hetcascade.config import ExperimentConfig
from hetcascade.experiments import run

p = parser(__doc__)
p.add_argument("--runs", type=int, default=1000)
p.add_argument("--coefficients", default="spearman,pearson,kendall")
args = p.parse_args()
datasets, out = setup(args, "seed_corr")
cfg = ExperimentConfig(datasets=datasets, runs_per_seed=args.runs, rng_seed=args.rng_seed,
                       coefficients=tuple(args.coefficients.split(",")))
res = run("exp-seed-corr", cfg, out)
for ds, model, feat, coef, val in res.tables["seed_feature_correlation.csv"][1]:
    print(f"{ds:<28}{feat:<30}{coef:<10}{val:>7.3f}")
print(f"tables in {out}")
