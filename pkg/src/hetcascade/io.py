"""CSV exchange formats."""

from __future__ import annotations

import csv
import os

import numpy as np

from .features import EdgeProbabilities, FeatureTable

FEATURES_HEADER = ("node_id", "influence", "susceptibility")
PROBABILITIES_HEADER = ("src", "dst", "p")
SCORES_HEADER = ("node_id", "metric", "score")
CAPACITY_HEADER = ("node_id", "capacity_mean", "capacity_std", "runs")
SEEDS_HEADER = ("rank", "node_id", "degree", "estimated_spread_after_rank")
REPORT_HEADER = ("dataset", "model", "metric", "pearson", "spearman", "kendall", "top10_precision", "n_pairs")


def fmt(x) -> str:
    """Shortest round-tripping text for floats, so reruns write identical bytes."""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, np.integer):
        return str(int(x))
    return str(x)


def write_csv(path: str | os.PathLike, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def read_csv(path: str | os.PathLike) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def write_features(path, f: FeatureTable) -> None:
    rows = ((i, f"{a:.6f}", f"{b:.6f}") for i, (a, b) in enumerate(zip(f.influence, f.susceptibility)))
    write_csv(path, FEATURES_HEADER, rows)


def read_features(path) -> FeatureTable:
    header, rows = read_csv(path)
    if tuple(header) != FEATURES_HEADER:
        raise ValueError(f"{path}: expected header {','.join(FEATURES_HEADER)}")
    rows.sort(key=lambda r: int(r[0]))
    ids = [int(r[0]) for r in rows]
    if ids != list(range(len(ids))):
        raise ValueError(f"{path}: node ids must be 0..n-1")
    return FeatureTable(np.array([float(r[1]) for r in rows]), np.array([float(r[2]) for r in rows]))


def write_edge_probabilities(path, p: EdgeProbabilities) -> None:
    write_csv(path, PROBABILITIES_HEADER, p.arcs())


def write_scores(path, scores) -> None:
    """``scores``: iterable of CentralityScores; absent values are skipped."""
    rows = []
    for sc in scores:
        for i, v in enumerate(sc.values):
            if not np.isnan(v):
                rows.append((i, sc.metric, float(v)))
    write_csv(path, SCORES_HEADER, rows)


def write_capacity(path, cap) -> None:
    rows = ((i, float(m), float(s), cap.runs) for i, (m, s) in enumerate(zip(cap.mean, cap.std)))
    write_csv(path, CAPACITY_HEADER, rows)


def write_seeds(path, sel, degree) -> None:
    rows = ((r + 1, v, int(degree[v]), est) for r, (v, est) in enumerate(zip(sel.seeds, sel.spread_after_rank)))
    write_csv(path, SEEDS_HEADER, rows)
