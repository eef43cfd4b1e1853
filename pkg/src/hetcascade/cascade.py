"""Independent-cascade simulation, Monte Carlo spread estimation and an exact oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .features import EdgeProbabilities
from .graph import Graph

EXACT_MAX_ARCS = 24


class CapacityError(ValueError):
    """Too many stochastic arcs for exhaustive enumeration."""


@dataclass(frozen=True)
class CascadeOutcome:
    infected: frozenset
    rounds: int


@dataclass(frozen=True)
class SpreadEstimate:
    mean_fraction: float
    std_dev: float
    runs: int
    ci95: tuple[float, float]

    @classmethod
    def from_fractions(cls, x: np.ndarray) -> SpreadEstimate:
        runs = len(x)
        mean = float(np.mean(x))
        std = float(np.std(x, ddof=1)) if runs > 1 else 0.0
        half = 1.96 * std / np.sqrt(runs)
        return cls(mean, std, runs, (mean - half, mean + half))


@dataclass(frozen=True, eq=False)
class NodeCapacity:
    mean: np.ndarray
    std: np.ndarray
    runs: int


def _seed_array(g: Graph, seeds) -> np.ndarray:
    s = np.unique(np.fromiter(seeds, dtype=np.int64))
    if len(s) == 0:
        raise ValueError("seed set is empty")
    if s[0] < 0 or s[-1] >= g.n:
        raise ValueError(f"seed ids must lie in 0..{g.n - 1}")
    return s


def simulate_cascade(
    g: Graph, p: EdgeProbabilities, seeds, rng_seed: int, stream: int = 0, run: int = 0
) -> CascadeOutcome:
    """One synchronous IC run.

    Each newly infected node gets a single attempt on every still-uninfected
    neighbor, succeeding on arc ``i -> j`` with probability ``p_ij``.  The
    outcome is a pure function of ``(rng_seed, stream, run)``: every arc carries
    one uniform per substream, so runs sharing a substream are coupled across
    seed sets and probability vectors.
    """
    s = _seed_array(g, seeds)
    infected, rounds = K.simulate(g.indptr, g.indices, p.p, s, rng_seed, stream, run)
    return CascadeOutcome(frozenset(infected.tolist()), int(rounds))


def spread_sizes(g: Graph, p: EdgeProbabilities, seeds, runs: int, rng_seed: int, stream: int = 0) -> np.ndarray:
    """Final infected counts of ``runs`` runs; run r uses substream (rng_seed, stream, r)."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    s = _seed_array(g, seeds)
    return K.spread_runs(g.indptr, g.indices, p.p, s, rng_seed, stream, runs)


def estimate_spread(
    g: Graph,
    p: EdgeProbabilities,
    seeds,
    runs: int,
    rng_seed: int,
    stream: int = 0,
    denominator: int | None = None,
) -> SpreadEstimate:
    """Monte Carlo spreading capacity as a fraction of ``denominator`` (default n)."""
    sizes = spread_sizes(g, p, seeds, runs, rng_seed, stream)
    return SpreadEstimate.from_fractions(sizes / (denominator or g.n))


def per_node_capacity(g: Graph, p: EdgeProbabilities, runs: int, rng_seed: int) -> NodeCapacity:
    """Spreading capacity of every node as a lone seed.

    Node i's run r uses substream (rng_seed, i, r), so entry i equals
    ``estimate_spread(g, p, {i}, runs, rng_seed, stream=i)``.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    mean, std = K.node_capacity(g.indptr, g.indices, p.p, rng_seed, runs, float(g.n))
    return NodeCapacity(mean, std, runs)


def reachable(g: Graph, live: np.ndarray, seeds) -> set[int]:
    """Nodes reachable from ``seeds`` over arcs flagged in ``live`` (CSR-aligned)."""
    seen = set(seeds)
    stack = list(seen)
    while stack:
        u = stack.pop()
        for k in range(g.indptr[u], g.indptr[u + 1]):
            v = int(g.indices[k])
            if live[k] and v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def exact_spread(g: Graph, p: EdgeProbabilities, seeds, chunk_bits: int = 20) -> float:
    """Expected number of infected nodes, summed over live-arc configurations.

    Arcs with p in {0, 1} are fixed and arcs into a seed cannot matter; the
    2^m configurations of the remaining ``m`` arcs are enumerated as bitmasks
    and reachability is propagated for all of them at once.
    """
    s = _seed_array(g, seeds)
    pv = p.p
    src, dst = g.arc_sources, g.indices
    is_seed = np.zeros(g.n, dtype=bool)
    is_seed[s] = True
    useful = (pv > 0) & ~is_seed[dst]
    random_arcs = np.flatnonzero(useful & (pv < 1))
    fixed_arcs = np.flatnonzero(useful & (pv >= 1))
    m = len(random_arcs)
    if m > EXACT_MAX_ARCS:
        raise CapacityError(f"{m} stochastic arcs exceed the limit of {EXACT_MAX_ARCS}")
    total = 0.0
    step = 1 << min(m, chunk_bits)
    for lo in range(0, 1 << m, step):
        cfg = np.arange(lo, lo + step, dtype=np.int64)
        prob = np.ones(step)
        live = {}
        for b, arc in enumerate(random_arcs):
            bit = ((cfg >> b) & 1).astype(bool)
            prob *= np.where(bit, pv[arc], 1.0 - pv[arc])
            live[arc] = bit
        infected = np.zeros((g.n, step), dtype=bool)
        infected[s] = True
        for _ in range(g.n):
            before = int(infected.sum())
            for arc in fixed_arcs:
                infected[dst[arc]] |= infected[src[arc]]
            for arc, bit in live.items():
                infected[dst[arc]] |= infected[src[arc]] & bit
            if int(infected.sum()) == before:
                break
        total += float(prob @ infected.sum(axis=0))
    return total
