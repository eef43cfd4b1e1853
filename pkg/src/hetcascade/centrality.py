"""The twelve node centrality metrics, unweighted and probability-weighted.

Weighted metrics read arc weights from an :class:`EdgeProbabilities`; the
weight of arc ``i -> j`` is ``p_ij``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .features import EdgeProbabilities
from .graph import Graph, is_connected, largest_component

METRICS = (
    "degree", "kcore", "hindex", "ecc", "closeness", "betweenness", "pagerank",
    "wdegree", "whindex", "wcloseness", "wbetweenness", "wpagerank",
)
WEIGHTED = frozenset(m for m in METRICS if m.startswith("w"))
# evaluated on the largest component, absent (NaN) elsewhere
COMPONENT_METRICS = frozenset({"ecc", "closeness", "wcloseness", "pagerank", "wpagerank"})

PATH_TOL = 1e-10


class DisconnectedGraphError(ValueError):
    def __init__(self, metric):
        super().__init__(f"{metric} needs a connected graph; evaluate it on largest_component(g)")


@dataclass(frozen=True, eq=False)
class CentralityScores:
    metric: str
    values: np.ndarray
    converged: bool = True
    iterations: int = 0

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")


def degree(g: Graph) -> CentralityScores:
    return CentralityScores("degree", g.degree.astype(float))


def k_core(g: Graph) -> CentralityScores:
    """Core index by bucket peeling (Batagelj-Zaversnik)."""
    n = g.n
    deg = g.degree.astype(np.int64).copy()
    max_deg = int(deg.max()) if n else 0
    bins = np.zeros(max_deg + 2, dtype=np.int64)
    np.add.at(bins, deg, 1)
    start = np.concatenate([[0], np.cumsum(bins)[:-1]])
    order = np.argsort(deg, kind="stable")
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    start = start.tolist()
    order = order.tolist()
    pos = pos.tolist()
    deg = deg.tolist()
    indptr, indices = g.indptr.tolist(), g.indices.tolist()
    for i in range(n):
        v = order[i]
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            if deg[u] > deg[v]:
                du = deg[u]
                pu, pw = pos[u], start[du]
                w = order[pw]
                if u != w:
                    order[pu], order[pw] = w, u
                    pos[u], pos[w] = pw, pu
                start[du] += 1
                deg[u] -= 1
    return CentralityScores("kcore", np.array(deg, dtype=float))


def h_of(values) -> int:
    """Largest h such that at least h of ``values`` are >= h."""
    v = np.sort(np.asarray(values))[::-1]
    ranks = np.arange(1, len(v) + 1)
    ok = v >= ranks
    return int(ranks[ok][-1]) if ok.any() else 0


def h_index(g: Graph) -> CentralityScores:
    d = g.degree
    return CentralityScores("hindex", np.array([h_of(d[g.neighbors(i)]) for i in range(g.n)], dtype=float))


def _sweep(g: Graph, metric: str):
    if not is_connected(g):
        raise DisconnectedGraphError(metric)
    return K.bfs_sweep(g.indptr, g.indices)


def eccentricity(g: Graph) -> CentralityScores:
    _, ecc, _ = _sweep(g, "ecc")
    return CentralityScores("ecc", ecc.astype(float))


def closeness(g: Graph) -> CentralityScores:
    total, _, _ = _sweep(g, "closeness")
    with np.errstate(divide="ignore"):
        vals = (g.n - 1) / total.astype(float)
    return CentralityScores("closeness", vals)


def betweenness(g: Graph) -> CentralityScores:
    """Unnormalized; each unordered source/target pair counted once."""
    bc = K.brandes(g.indptr, g.indices, g.reverse_arc, np.ones(len(g.indices)), False, 0.0)
    return CentralityScores("betweenness", bc / 2.0)


def _power_iteration(g: Graph, share: np.ndarray, metric: str, tol: float, max_iter: int):
    """Iterate x_i <- sum over arcs j->i of share[arc] * x_j, starting from x = 1.

    ``share`` is the fraction of the source's value sent along each arc (it
    sums to 1 per source), so the total stays n.  Without damping a bipartite
    graph oscillates with period 2; if ``max_iter`` is reached the mean of the
    last two iterates is returned with ``converged=False``, which is the
    stationary vector in that case.
    """
    src, dst = g.arc_sources, g.indices
    x = np.ones(g.n)
    for it in range(1, max_iter + 1):
        new = np.bincount(dst, weights=share * x[src], minlength=g.n)
        if np.max(np.abs(new - x)) < tol:
            return CentralityScores(metric, new, True, it)
        prev, x = x, new
    return CentralityScores(metric, (x + prev) / 2.0, False, max_iter)


def pagerank(g: Graph, tol: float = 1e-10, max_iter: int = 1000) -> CentralityScores:
    """Undamped PageRank: every node splits its value evenly over its arcs."""
    zero = np.flatnonzero(g.degree == 0)
    if len(zero):
        raise ValueError(f"pagerank undefined with isolated node {int(zero[0])}")
    share = 1.0 / g.degree[g.arc_sources]
    return _power_iteration(g, share, "pagerank", tol, max_iter)


def weighted_degree(g: Graph, p: EdgeProbabilities) -> CentralityScores:
    return CentralityScores("wdegree", out_strength(g, p))


def out_strength(g: Graph, p: EdgeProbabilities) -> np.ndarray:
    """Sum of p over each node's out-arcs, correctly rounded (so a constant c gives exactly c * degree)."""
    ptr = g.indptr.tolist()
    vals = p.p.tolist()
    return np.array([math.fsum(vals[ptr[i]:ptr[i + 1]]) for i in range(g.n)], dtype=float)


def weighted_h_of(weights, strengths) -> float:
    """sup{x > 0 : f(x) >= x} for the step function built from (w, s) pairs.

    Pairs must already be ordered by descending strength; step r covers
    (W_{r-1}, W_r] with value s_r, where W are cumulative weights.
    """
    best = 0.0
    lo = 0.0
    for w, s in zip(weights, strengths):
        hi = lo + w
        if w > 0 and s > lo:
            best = max(best, min(hi, s))
        lo = hi
    return best


def weighted_h_index(g: Graph, p: EdgeProbabilities) -> CentralityScores:
    """Neighbors ordered by descending out-strength, ties by ascending id."""
    s = out_strength(g, p)
    vals = np.zeros(g.n)
    for i in range(g.n):
        lo, hi = g.indptr[i], g.indptr[i + 1]
        nbrs = g.indices[lo:hi]
        order = np.lexsort((nbrs, -s[nbrs]))
        vals[i] = weighted_h_of(p.p[lo:hi][order], s[nbrs][order])
    return CentralityScores("whindex", vals)


def arc_lengths(p: EdgeProbabilities, distance: str = "weight") -> np.ndarray:
    """Arc lengths for weighted shortest paths.

    ``weight`` uses the probability itself as length; ``inverse`` uses 1/p
    (arcs with p = 0 become unusable).
    """
    if distance == "weight":
        return p.p
    if distance == "inverse":
        with np.errstate(divide="ignore"):
            return 1.0 / p.p
    raise ValueError(f"unknown distance mode {distance!r}")


def weighted_closeness(g: Graph, p: EdgeProbabilities, distance: str = "weight") -> CentralityScores:
    if not is_connected(g):
        raise DisconnectedGraphError("wcloseness")
    sums, _ = K.dijkstra_sums(g.indptr, g.indices, arc_lengths(p, distance))
    with np.errstate(divide="ignore"):
        return CentralityScores("wcloseness", 1.0 / sums)


def weighted_betweenness(g: Graph, p: EdgeProbabilities, distance: str = "weight") -> CentralityScores:
    """Brandes over weighted shortest paths; path lengths within PATH_TOL count as equal.

    Zero-length arcs are allowed, but nodes tied through them are ordered by
    settle order, so such inputs are not relabeling-invariant.
    """
    bc = K.brandes(g.indptr, g.indices, g.reverse_arc, arc_lengths(p, distance), True, PATH_TOL)
    return CentralityScores("wbetweenness", bc / 2.0)


def weighted_pagerank(
    g: Graph, p: EdgeProbabilities, tol: float = 1e-10, max_iter: int = 1000
) -> CentralityScores:
    """Each node splits its value over out-arcs in proportion to p_ij."""
    s = out_strength(g, p)
    zero = np.flatnonzero(s <= 0)
    if len(zero):
        raise ValueError(f"weighted pagerank undefined: node {int(zero[0])} has zero out-strength")
    share = p.p / s[g.arc_sources]
    return _power_iteration(g, share, "wpagerank", tol, max_iter)


def compute(metric: str, g: Graph, p: EdgeProbabilities | None = None, **kw) -> CentralityScores:
    fn = {
        "degree": degree, "kcore": k_core, "hindex": h_index, "ecc": eccentricity,
        "closeness": closeness, "betweenness": betweenness, "pagerank": pagerank,
        "wdegree": weighted_degree, "whindex": weighted_h_index,
        "wcloseness": weighted_closeness, "wbetweenness": weighted_betweenness,
        "wpagerank": weighted_pagerank,
    }[metric]
    if metric in WEIGHTED:
        if p is None:
            raise ValueError(f"{metric} needs edge probabilities")
        return fn(g, p, **kw)
    return fn(g, **kw)


def all_metrics(g: Graph, p: EdgeProbabilities, metrics=METRICS) -> dict[str, CentralityScores]:
    """Every metric as a full-length vector over ``g``.

    Metrics in COMPONENT_METRICS are computed on the largest component and
    are NaN for nodes outside it.
    """
    out = {}
    sub = mapping = sub_p = None
    for m in metrics:
        if m in COMPONENT_METRICS:
            if sub is None:
                sub, mapping = largest_component(g)
                arcs = [g.arc_index(int(mapping[i]), int(mapping[j]))
                        for i, j in zip(sub.arc_sources, sub.indices)]
                sub_p = EdgeProbabilities(sub, p.p[np.asarray(arcs, dtype=np.int64)])
            res = compute(m, sub, sub_p)
            full = np.full(g.n, np.nan)
            full[mapping] = res.values
            out[m] = CentralityScores(m, full, res.converged, res.iterations)
        else:
            out[m] = compute(m, g, p)
    return out
