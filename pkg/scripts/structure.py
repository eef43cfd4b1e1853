"""Structural summary (N, L, <k>, assortativity, clustering) of each dataset."""

from _common import parser, setup

from hetcascade.experiments import load_dataset
from hetcascade.graph import structural_summary

args = parser(__doc__).parse_args()
datasets, _ = setup(args, "structure")
print(f"{'dataset':<28}{'N':>7}{'L':>8}{'<k>':>8}{'assort':>8}{'clust':>8}{'trans':>8}")
for spec in datasets:
    name, g = load_dataset(spec)
    s = structural_summary(g)
    print(f"{name:<28}{s.n:>7}{s.l:>8}{s.avg_degree:>8.3f}{s.degree_assortativity:>8.3f}"
          f"{s.clustering:>8.3f}{s.transitivity:>8.3f}")
