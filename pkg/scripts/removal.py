"""Spread of a fixed seed set while removing nodes by influence, by susceptibility or at random."""

from _common import parser, setup

from hetcascade.config import ExperimentConfig
from hetcascade.experiments import removal_curve, run

p = parser(__doc__)
p.add_argument("--seed-policy", action="append",
               help="e.g. top_degree_fraction:0.01, random_fraction:0.01, tim_fraction:0.01, random_count:100")
p.add_argument("--realizations", type=int, default=100)
p.add_argument("--runs", type=int, default=1, help="cascade runs per realization")
args = p.parse_args()
datasets, out = setup(args, "removal")
grid = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5)
for policy in args.seed_policy or ["top_degree_fraction:0.01", "random_fraction:0.01", "tim_fraction:0.01"]:
    cfg = ExperimentConfig(datasets=datasets, seed_policy=policy, realizations=args.realizations,
                           runs_per_seed=args.runs, removal_grid=grid, rng_seed=args.rng_seed)
    sub = out / policy.replace(":", "_")
    curve = removal_curve(run("exp-removal", cfg, sub))
    print(policy)
    for s in cfg.removal_strategies:
        print(f"  {s:<18}" + " ".join(f"{curve[(s, phi)][0]:.4f}" for phi in grid))
    print(f"  tables in {sub}")
