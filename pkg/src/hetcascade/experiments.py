"""The four experiment pipelines.

Each pipeline takes an :class:`ExperimentConfig` and returns an
:class:`ExperimentResult` holding plain CSV tables plus manifest entries.
All randomness flows from ``cfg.rng_seed`` through :func:`substream`, so a
rerun with the same config writes byte-identical tables.
"""

from __future__ import annotations

import logging
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import UndefinedCorrelationError, associate, iqr, kendall, pearson, spearman
from .cascade import SpreadEstimate, per_node_capacity, spread_sizes
from .centrality import METRICS, all_metrics
from .config import STAGES, ExperimentConfig, format_key_values, parse_count, substream
from .features import (
    EdgeProbabilities,
    FeatureTable,
    InfectionModel,
    assign_features,
    edge_probabilities,
    neighbor_feature_sums,
)
from .graph import Graph, generate_small_world, read_edge_list
from .io import REPORT_HEADER, write_csv
from .tim import select_seeds

log = logging.getLogger(__name__)

DEFAULT_RUNS = {"table2": 100, "seed_corr": 1000, "removal": 1}
DEFAULT_MODELS = {
    "table2": ("constant:0.1", "avg_s", "i", "is"),
    "seed_degree": ("constant:0.1", "is"),
    "seed_corr": ("is",),
    "removal": ("is",),
}


class ExperimentError(RuntimeError):
    pass


@dataclass
class ExperimentResult:
    name: str
    config: ExperimentConfig
    tables: dict[str, tuple[tuple[str, ...], list[tuple]]] = field(default_factory=dict)
    meta: dict[str, str] = field(default_factory=dict)

    def write(self, out_dir) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for fname, (header, rows) in self.tables.items():
            write_csv(out / fname, header, rows)
        items = list(self.config.to_items())
        items += [(f"meta.{k}", v) for k, v in self.meta.items()]
        (out / "manifest.txt").write_text(format_key_values(items), encoding="utf-8")
        return out


def load_dataset(spec: str) -> tuple[str, Graph]:
    """Graph for a dataset entry: ``ws:n=..,k=..,p=..,seed=..`` or an edge-list path."""
    if spec.startswith("ws:"):
        params = dict(kv.split("=", 1) for kv in spec[3:].split(",") if kv)
        try:
            g = generate_small_world(
                int(params["n"]), int(params["k"]), float(params.get("p", 0.1)), int(params.get("seed", 0))
            )
        except (KeyError, ValueError) as exc:
            raise ExperimentError(f"bad generator spec {spec!r}: {exc}") from exc
        return "ws-" + "-".join(f"{k}{v}" for k, v in params.items()), g
    try:
        loaded = read_edge_list(spec)
    except (OSError, ValueError) as exc:
        raise ExperimentError(f"cannot load dataset {spec}: {exc}") from exc
    return Path(spec).stem, loaded.graph


def _base_meta(name: str, cfg: ExperimentConfig) -> dict[str, str]:
    return {
        "experiment": name,
        "software_version": __version__,
        "rng_seed": str(cfg.rng_seed),
        "substream_stages": ",".join(f"{k}:{v}" for k, v in STAGES.items()),
    }


def _models(cfg: ExperimentConfig, exp: str) -> list[InfectionModel]:
    return [InfectionModel.parse(m) for m in (cfg.models or DEFAULT_MODELS[exp])]


def _features(cfg, d: int, r: int, g: Graph) -> FeatureTable:
    return assign_features(g, substream(cfg.rng_seed, "features", d, r))


# ------------------------------------------------------------------ Table 2


def exp_metric_association(cfg: ExperimentConfig) -> ExperimentResult:
    """Correlation of per-node spreading capacity with the 12 centrality metrics.

    One feature draw per dataset is shared by all models, and all models use
    the same cascade substreams, so model comparisons are paired.  Rows with
    metric ``mean`` average the metric rows; dataset ``all`` averages the
    per-dataset means.  A metric that is constant on a dataset gets a NaN row
    (noted in the manifest) and is left out of the means; the ``n_pairs``
    column of a mean row counts the metrics averaged.
    """
    t0 = time.perf_counter()
    runs = cfg.runs_per_seed or DEFAULT_RUNS["table2"]
    models = _models(cfg, "table2")
    rows = []
    per_model: dict[str, list[tuple]] = {str(m): [] for m in models}
    meta = _base_meta("exp-table2", cfg)
    for d, spec in enumerate(cfg.datasets):
        name, g = load_dataset(spec)
        f = _features(cfg, d, 0, g)
        cascade_seed = substream(cfg.rng_seed, "cascade", d, 0)
        for m in models:
            p = edge_probabilities(g, f, m)
            cap = per_node_capacity(g, p, runs, cascade_seed)
            scores = all_metrics(g, p)
            reports = []
            for metric in METRICS:
                sc = scores[metric]
                if not sc.converged:
                    meta[f"unconverged.{name}.{m}.{metric}"] = str(sc.iterations)
                try:
                    rep = associate(cap.mean, sc.values, cfg.top_fraction)
                except UndefinedCorrelationError as exc:
                    # constant metric on this graph (e.g. one k-core shell): no ranking information
                    meta[f"degenerate.{name}.{m}.{metric}"] = str(exc)
                    rows.append((name, str(m), metric, *[math.nan] * 4, 0))
                    continue
                reports.append(rep)
                rows.append((name, str(m), metric, rep.pearson, rep.spearman, rep.kendall,
                             rep.top_precision, rep.n_pairs))
            if not reports:
                raise ExperimentError(f"{name}/{m}: every metric is degenerate (constant capacity or scores)")
            avg = _mean_row(reports)
            rows.append((name, str(m), "mean", *avg, len(reports)))
            per_model[str(m)].append(avg)
            log.info("%s %s mean spearman %.3f", name, m, avg[1])
    for m, avgs in per_model.items():
        a = np.mean(np.array(avgs), axis=0)
        rows.append(("all", m, "mean", *map(float, a), len(avgs)))
    meta["runs_per_seed"] = str(runs)
    meta["wall_time_s"] = f"{time.perf_counter() - t0:.1f}"
    res = ExperimentResult("exp-table2", cfg, meta=meta)
    res.tables["table2.csv"] = (REPORT_HEADER, rows)
    return res


def _mean_row(reports) -> tuple[float, float, float, float]:
    return (
        float(np.mean([r.pearson for r in reports])),
        float(np.mean([r.spearman for r in reports])),
        float(np.mean([r.kendall for r in reports])),
        float(np.mean([r.top_precision for r in reports])),
    )


def table2_summary(result: ExperimentResult) -> dict[str, dict[str, float]]:
    """Model -> {pearson, spearman, kendall, top10_precision} from the ``all`` rows."""
    _, rows = result.tables["table2.csv"]
    return {
        r[1]: dict(zip(("pearson", "spearman", "kendall", "top10_precision"), r[3:7]))
        for r in rows if r[0] == "all"
    }


# ------------------------------------------------------------------ Fig. 1


def exp_tim_seed_degree(cfg: ExperimentConfig) -> ExperimentResult:
    """Degrees of TIM seeds under each model, one fresh feature draw per round.

    Both models of a round share the RR-set substream.
    """
    t0 = time.perf_counter()
    models = _models(cfg, "seed_degree")
    seeds_rows, summary_rows = [], []
    for d, spec in enumerate(cfg.datasets):
        name, g = load_dataset(spec)
        k = parse_count(cfg.tim_k, g.n)
        for r in range(cfg.rounds):
            f = _features(cfg, d, r, g)
            tim_seed = substream(cfg.rng_seed, "tim", d, r)
            for m in models:
                p = edge_probabilities(g, f, m)
                sel = _tim(cfg, g, p, k, tim_seed)
                degs = g.degree[sel.seeds]
                for rank, (v, deg) in enumerate(zip(sel.seeds, degs), start=1):
                    seeds_rows.append((name, r, str(m), rank, v, int(deg)))
                summary_rows.append((name, r, str(m), len(degs), float(np.mean(degs)),
                                     float(np.var(degs)), iqr(degs)))
            log.info("%s round %d done", name, r)
    meta = _base_meta("exp-seed-degree", cfg)
    meta["wall_time_s"] = f"{time.perf_counter() - t0:.1f}"
    res = ExperimentResult("exp-seed-degree", cfg, meta=meta)
    res.tables["seed_degrees.csv"] = (("dataset", "round", "model", "rank", "node_id", "degree"), seeds_rows)
    res.tables["seed_degree_dispersion.csv"] = (
        ("dataset", "round", "model", "k", "mean_degree", "variance", "iqr"), summary_rows)
    return res


def _tim(cfg: ExperimentConfig, g: Graph, p: EdgeProbabilities, k: int, seed: int):
    if cfg.epsilon > 0:
        return select_seeds(g, p, k, epsilon=cfg.epsilon, rng_seed=seed)
    return select_seeds(g, p, k, theta=cfg.theta_per_node * g.n, rng_seed=seed)


# ------------------------------------------------------------------ Fig. 2


SEED_FEATURES = ("influence", "susceptibility", "neighbor_influence_sum", "neighbor_susceptibility_sum")
_COEFFS = {"pearson": pearson, "spearman": spearman, "kendall": kendall}


def exp_seed_feature_correlation(cfg: ExperimentConfig) -> ExperimentResult:
    """Correlation of single-seed capacity with the seed's own and 1-order features.

    One frozen feature draw per dataset; the first configured model is used
    (I*S unless configured otherwise).
    """
    t0 = time.perf_counter()
    runs = cfg.runs_per_seed or DEFAULT_RUNS["seed_corr"]
    model = _models(cfg, "seed_corr")[0]
    rows = []
    for d, spec in enumerate(cfg.datasets):
        name, g = load_dataset(spec)
        f = _features(cfg, d, 0, g)
        p = edge_probabilities(g, f, model)
        cap = per_node_capacity(g, p, runs, substream(cfg.rng_seed, "cascade", d, 0))
        sum_i, sum_s = neighbor_feature_sums(g, f)
        feats = dict(zip(SEED_FEATURES, (f.influence, f.susceptibility, sum_i, sum_s)))
        for feat, vec in feats.items():
            for c in cfg.coefficients:
                try:
                    val = _COEFFS[c](cap.mean, vec)
                except UndefinedCorrelationError as exc:
                    raise ExperimentError(f"{name}/{feat}: {exc}") from exc
                rows.append((name, str(model), feat, c, val))
    meta = _base_meta("exp-seed-corr", cfg)
    meta["runs_per_seed"] = str(runs)
    meta["wall_time_s"] = f"{time.perf_counter() - t0:.1f}"
    res = ExperimentResult("exp-seed-corr", cfg, meta=meta)
    res.tables["seed_feature_correlation.csv"] = (("dataset", "model", "feature", "coefficient", "value"), rows)
    return res


def seed_corr_values(result: ExperimentResult, coefficient: str = "spearman") -> dict[tuple[str, str], float]:
    _, rows = result.tables["seed_feature_correlation.csv"]
    return {(r[0], r[2]): r[4] for r in rows if r[3] == coefficient}


# ------------------------------------------------------------------ Figs. 3-5


def choose_seeds(cfg: ExperimentConfig, g: Graph, p: EdgeProbabilities, d: int, r: int) -> np.ndarray:
    policy, _, arg = cfg.seed_policy.partition(":")
    k = parse_count(f"{policy}:{arg}", g.n)
    if policy.startswith("random"):
        rng = np.random.default_rng(substream(cfg.rng_seed, "seeds", d, r))
        return np.sort(rng.choice(g.n, size=k, replace=False))
    if policy.startswith("top_degree"):
        return np.sort(np.lexsort((np.arange(g.n), -g.degree))[:k])
    return np.sort(np.asarray(_tim(cfg, g, p, k, substream(cfg.rng_seed, "tim", d, r)).seeds))


def removal_order(strategy: str, f: FeatureTable, pool: np.ndarray, rng_seed: int) -> np.ndarray:
    """Pool nodes in removal order: highest I or S first (ties by id), or a random permutation."""
    if strategy == "by_influence":
        return pool[np.lexsort((pool, -f.influence[pool]))]
    if strategy == "by_susceptibility":
        return pool[np.lexsort((pool, -f.susceptibility[pool]))]
    return np.random.default_rng(rng_seed).permutation(pool)


def exp_removal(cfg: ExperimentConfig) -> ExperimentResult:
    """Spread of a fixed seed set as non-seed nodes are removed by I, by S or at random.

    Per realization: fresh features, seeds by policy on the intact graph, then
    for each removal fraction phi the top floor(phi n) pool nodes of each
    strategy are removed and the cascade is rerun.  All strategies and
    fractions of a realization share cascade substreams, so curves are
    coupled.  Spread is a fraction of the original n.
    """
    t0 = time.perf_counter()
    runs = cfg.runs_per_seed or DEFAULT_RUNS["removal"]
    model = _models(cfg, "removal")[0]
    per_real, curves = [], []
    for d, spec in enumerate(cfg.datasets):
        name, g = load_dataset(spec)
        counts = [int(math.floor(phi * g.n + 1e-9)) for phi in cfg.removal_grid]
        values = {s: np.empty((cfg.realizations, len(counts))) for s in cfg.removal_strategies}
        for r in range(cfg.realizations):
            f = _features(cfg, d, r, g)
            p = edge_probabilities(g, f, model)
            seeds = choose_seeds(cfg, g, p, d, r)
            pool = np.setdiff1d(np.arange(g.n), seeds)
            if counts[-1] > len(pool):
                raise ExperimentError(
                    f"{name}: cannot remove {counts[-1]} nodes, only {len(pool)} non-seeds "
                    f"(max fraction {len(pool) / g.n:.4f})")
            cascade_seed = substream(cfg.rng_seed, "cascade", d, r)
            for s in cfg.removal_strategies:
                order = removal_order(s, f, pool, substream(cfg.rng_seed, "removal", d, r))
                for j, c in enumerate(counts):
                    pr = p.without_nodes(order[:c]) if c else p
                    sizes = spread_sizes(g, pr, seeds, runs, cascade_seed)
                    values[s][r, j] = float(np.mean(sizes)) / g.n
        for s in cfg.removal_strategies:
            for j, phi in enumerate(cfg.removal_grid):
                col = values[s][:, j]
                est = SpreadEstimate.from_fractions(col)
                curves.append((name, cfg.seed_policy, s, phi, est.mean_fraction, est.std_dev,
                               est.ci95[0], est.ci95[1], cfg.realizations))
                per_real.extend((name, s, phi, r, float(v)) for r, v in enumerate(col))
        log.info("%s removal done", name)
    meta = _base_meta("exp-removal", cfg)
    meta["runs_per_realization"] = str(runs)
    meta["wall_time_s"] = f"{time.perf_counter() - t0:.1f}"
    res = ExperimentResult("exp-removal", cfg, meta=meta)
    res.tables["removal_curves.csv"] = (
        ("dataset", "seed_policy", "strategy", "fraction", "mean", "std", "ci_lo", "ci_hi", "realizations"), curves)
    res.tables["removal_realizations.csv"] = (("dataset", "strategy", "fraction", "realization", "spread"), per_real)
    return res


def removal_curve(result: ExperimentResult, dataset: str | None = None) -> dict[tuple[str, float], tuple]:
    """(strategy, fraction) -> (mean, ci_lo, ci_hi)."""
    _, rows = result.tables["removal_curves.csv"]
    return {(r[2], r[3]): (r[4], r[6], r[7]) for r in rows if dataset is None or r[0] == dataset}


EXPERIMENTS = {
    "exp-table2": exp_metric_association,
    "exp-seed-degree": exp_tim_seed_degree,
    "exp-seed-corr": exp_seed_feature_correlation,
    "exp-removal": exp_removal,
}


def run(name: str, cfg: ExperimentConfig, out_dir: str | os.PathLike | None = None) -> ExperimentResult:
    res = EXPERIMENTS[name](cfg)
    if out_dir is not None:
        res.write(out_dir)
    return res
