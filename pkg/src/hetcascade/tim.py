"""Influence maximization with reverse-reachable (RR) sets, TIM style.

An RR set is the set of nodes that reach a uniformly drawn root through live
arcs of one random live-arc realization.  For any seed set S, n times the
fraction of RR sets hit by S is an unbiased estimate of its expected spread,
so seed selection reduces to greedy maximum coverage over sampled RR sets.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .features import EdgeProbabilities
from .graph import Graph

THETA_PER_NODE = 200
DEFAULT_EPSILON = 0.1
DEFAULT_ELL = 1.0

# phases keep the KPT pilot samples apart from the selection samples
_SELECT, _KPT = 0, 1


@dataclass(frozen=True, eq=False)
class RRCollection:
    """RR sets stored flat: set t is ``members[offsets[t]:offsets[t+1]]``."""

    n: int
    offsets: np.ndarray
    members: np.ndarray
    roots: np.ndarray

    @property
    def theta(self) -> int:
        return len(self.offsets) - 1

    @property
    def sets(self) -> list[np.ndarray]:
        return [self.members[a:b] for a, b in zip(self.offsets[:-1], self.offsets[1:])]

    @classmethod
    def from_sets(cls, sets, n: int, roots=None) -> RRCollection:
        sets = [np.unique(np.asarray(list(s), dtype=np.int32)) for s in sets]
        offsets = np.zeros(len(sets) + 1, dtype=np.int64)
        np.cumsum([len(s) for s in sets], out=offsets[1:])
        members = np.concatenate(sets) if sets else np.zeros(0, np.int32)
        if roots is None:
            roots = np.array([s[0] if len(s) else -1 for s in sets], dtype=np.int64)
        return cls(n, offsets, members.astype(np.int32), np.asarray(roots, dtype=np.int64))

    def coverage(self, seeds) -> float:
        """Fraction of sets containing at least one of ``seeds``."""
        hit = np.zeros(self.n, dtype=bool)
        hit[np.asarray(list(seeds), dtype=np.int64)] = True
        per_member = hit[self.members].astype(np.int64)
        counts = np.add.reduceat(per_member, self.offsets[:-1]) if len(per_member) else np.zeros(self.theta)
        return float(np.mean(counts > 0))


@dataclass(frozen=True)
class SeedSelection:
    seeds: list[int]
    estimated_spread: float
    coverage_fraction: float
    spread_after_rank: list[float] = field(default_factory=list)
    theta: int = 0
    meta: dict = field(default_factory=dict)


def sample_rr_set(g: Graph, p: EdgeProbabilities, rng_seed: int, index: int = 0) -> np.ndarray:
    """One RR set from substream ``index``; sorted node ids, root included."""
    off, mem, _, _ = K.rr_sets(g.indptr, g.indices, g.reverse_arc, p.p, rng_seed, _SELECT, index, 1)
    return np.sort(mem)


def sample_rr_sets(g: Graph, p: EdgeProbabilities, theta: int, rng_seed: int, start: int = 0) -> RRCollection:
    off, mem, roots, _ = K.rr_sets(g.indptr, g.indices, g.reverse_arc, p.p, rng_seed, _SELECT, start, theta)
    return RRCollection(g.n, off, mem, roots)


def greedy_max_coverage(rr: RRCollection, k: int) -> SeedSelection:
    """Pick ``k`` nodes, each time the one hitting most uncovered sets (ties: lowest id)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > rr.n:
        warnings.warn(f"k={k} exceeds n={rr.n}; returning all nodes", stacklevel=2)
        k = rr.n
    if rr.theta == 0:
        raise ValueError("no RR sets to cover")
    seeds, cum = K.greedy_cover(rr.offsets, rr.members, rr.n, k)
    after = (rr.n * cum / rr.theta).tolist()
    cov = float(cum[-1] / rr.theta)
    return SeedSelection(seeds.tolist(), rr.n * cov, cov, after, rr.theta)


def log_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def estimate_kpt(g: Graph, p: EdgeProbabilities, k: int, rng_seed: int, ell: float = DEFAULT_ELL) -> float:
    """TIM's KPT* lower bound on the mean spread of a k-node set drawn by in-degree.

    Each pilot RR set R contributes kappa(R) = 1 - (1 - w(R)/m)^k, where w(R)
    counts arcs entering R and m is the number of arcs.  Batch i has
    (6 ell ln n + 6 ln log2 n) 2^i sets; the first batch whose mean kappa
    exceeds 2^-i yields KPT* = n * mean / 2.
    """
    n, m = g.n, len(g.indices)
    if n < 2 or m == 0:
        return 1.0
    log2n = math.log2(n)
    start = 0
    for i in range(1, max(2, int(log2n))):
        c_i = int(math.ceil((6 * ell * math.log(n) + 6 * math.log(log2n)) * 2**i))
        _, _, _, widths = K.rr_sets(g.indptr, g.indices, g.reverse_arc, p.p, rng_seed, _KPT, start, c_i)
        start += c_i
        kappa = 1.0 - (1.0 - widths / m) ** k
        if kappa.mean() > 2.0**-i:
            return n * kappa.mean() / 2.0
    return 1.0


def tim_theta(n: int, k: int, kpt: float, epsilon: float, ell: float = DEFAULT_ELL) -> tuple[int, float]:
    """theta = lambda / KPT with lambda = (8 + 2 eps) n (ell ln n + ln C(n,k) + ln 2) / eps^2."""
    lam = (8 + 2 * epsilon) * n * (ell * math.log(n) + log_binom(n, k) + math.log(2)) / epsilon**2
    return max(1, int(math.ceil(lam / kpt))), lam


def select_seeds(
    g: Graph,
    p: EdgeProbabilities,
    k: int,
    theta: int | None = None,
    epsilon: float | None = None,
    rng_seed: int = 0,
    ell: float = DEFAULT_ELL,
) -> SeedSelection:
    """Choose ``k`` seeds by greedy coverage of RR sets.

    Give ``theta`` for a fixed sample budget, or ``epsilon`` to size it by the
    TIM rule; with neither, ``theta = 200 * n``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    meta: dict = {}
    if epsilon is not None:
        if epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {epsilon}")
        kk = min(k, g.n)
        kpt = estimate_kpt(g, p, kk, rng_seed, ell)
        theta, lam = tim_theta(g.n, kk, kpt, epsilon, ell)
        meta = {"mode": "auto", "epsilon": epsilon, "ell": ell, "kpt": kpt, "lambda": lam}
    elif theta is None:
        theta = THETA_PER_NODE * g.n
        meta = {"mode": "fixed", "theta_per_node": THETA_PER_NODE}
    else:
        meta = {"mode": "fixed"}
    if theta < 1:
        raise ValueError("theta must be >= 1")
    rr = sample_rr_sets(g, p, theta, rng_seed)
    sel = greedy_max_coverage(rr, k)
    return SeedSelection(sel.seeds, sel.estimated_spread, sel.coverage_fraction,
                         sel.spread_after_rank, sel.theta, meta)
