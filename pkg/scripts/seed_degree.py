"""Degrees of TIM seeds under constant and I*S infection rates, per round."""

from collections import defaultdict

from _common import parser, setup

from hetcascade.config import ExperimentConfig
from hetcascade.experiments import run

p = parser(__doc__)
p.add_argument("--rounds", type=int, default=10)
p.add_argument("--tim-k", default="fraction:0.01")
p.add_argument("--theta-per-node", type=int, default=200)
p.add_argument("--epsilon", type=float, default=0.0, help="> 0 switches to the adaptive sample budget")
args = p.parse_args()
datasets, out = setup(args, "seed_degree")
cfg = ExperimentConfig(datasets=datasets, rounds=args.rounds, tim_k=args.tim_k,
                       theta_per_node=args.theta_per_node, epsilon=args.epsilon, rng_seed=args.rng_seed)
res = run("exp-seed-degree", cfg, out)
_, rows = res.tables["seed_degree_dispersion.csv"]
by_round = defaultdict(dict)
for ds, r, model, k, mean, var, iqr in rows:
    by_round[(ds, r)][model] = (mean, var, iqr)
for (ds, r), models in by_round.items():
    cells = "  ".join(f"{m}: mean {v[0]:.2f} var {v[1]:.2f} iqr {v[2]:.2f}" for m, v in models.items())
    print(f"{ds} round {r}: {cells}")
print(f"tables in {out}")
