"""Per-node influence/susceptibility and the arc infection probabilities built from them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph

MODEL_NAMES = ("constant", "avg_s", "i", "is")


@dataclass(frozen=True, eq=False)
class FeatureTable:
    influence: np.ndarray
    susceptibility: np.ndarray

    def __post_init__(self):
        for name in ("influence", "susceptibility"):
            a = np.asarray(getattr(self, name), dtype=float)
            if a.ndim != 1:
                raise ValueError(f"{name} must be one-dimensional")
            if not np.all((a >= 0) & (a <= 1)):
                raise ValueError(f"{name} scores must lie in [0, 1]")
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        if len(self.influence) != len(self.susceptibility):
            raise ValueError("influence and susceptibility differ in length")

    def __len__(self):
        return len(self.influence)


@dataclass(frozen=True)
class InfectionModel:
    """How an arc probability is formed.

    ``kind`` is one of ``constant`` (p = c), ``avg_s`` (p = mean susceptibility
    of the source's neighbors), ``i`` (p = I_src) or ``is`` (p = I_src * S_dst).
    """

    kind: str
    c: float = 0.1

    def __post_init__(self):
        if self.kind not in MODEL_NAMES:
            raise ValueError(f"unknown infection model {self.kind!r}; expected one of {MODEL_NAMES}")
        if not 0.0 <= self.c <= 1.0:
            raise ValueError(f"constant rate must lie in [0, 1], got {self.c}")

    @classmethod
    def parse(cls, text: str) -> InfectionModel:
        """``constant``, ``constant:0.2``, ``avg_s``, ``i`` or ``is``."""
        kind, _, arg = text.strip().partition(":")
        return cls(kind, float(arg)) if arg else cls(kind)

    def __str__(self):
        return f"constant:{self.c:g}" if self.kind == "constant" else self.kind


CONSTANT = InfectionModel("constant")
AVG_SUSCEPTIBILITY = InfectionModel("avg_s")
INFLUENCE_ONLY = InfectionModel("i")
INFLUENCE_TIMES_SUSCEPTIBILITY = InfectionModel("is")


@dataclass(frozen=True, eq=False)
class EdgeProbabilities:
    """Infection probability per directed arc, aligned with ``graph`` CSR positions."""

    graph: Graph
    p: np.ndarray

    def __post_init__(self):
        p = np.ascontiguousarray(self.p, dtype=float)
        if p.shape != self.graph.indices.shape:
            raise ValueError("one probability per arc expected")
        if not np.all((p >= 0) & (p <= 1)):
            raise ValueError("arc probabilities must lie in [0, 1]")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    def __getitem__(self, arc: tuple[int, int]) -> float:
        i, j = arc
        return float(self.p[self.graph.arc_index(i, j)])

    def arcs(self):
        """Iterate ``(src, dst, p)`` in CSR order."""
        return zip(self.graph.arc_sources.tolist(), self.graph.indices.tolist(), self.p.tolist())

    def without_nodes(self, removed) -> EdgeProbabilities:
        """Zero every arc touching ``removed``; equivalent to deleting those nodes for spreading."""
        gone = np.zeros(self.graph.n, dtype=bool)
        gone[np.asarray(removed, dtype=np.int64)] = True
        mask = gone[self.graph.arc_sources] | gone[self.graph.indices]
        return EdgeProbabilities(self.graph, np.where(mask, 0.0, self.p))

    @classmethod
    def uniform(cls, g: Graph, c: float) -> EdgeProbabilities:
        return cls(g, np.full(len(g.indices), float(c)))


def assign_features(g: Graph | int, rng_seed: int) -> FeatureTable:
    """Draw I and S independently from U(0, 1) for every node."""
    n = g if isinstance(g, int) else g.n
    rng = np.random.default_rng(rng_seed)
    influence = rng.random(n)
    susceptibility = rng.random(n)
    return FeatureTable(influence, susceptibility)


def edge_probabilities(g: Graph, f: FeatureTable, m: InfectionModel) -> EdgeProbabilities:
    if len(f) != g.n:
        raise ValueError(f"feature table covers {len(f)} nodes, graph has {g.n}")
    src, dst = g.arc_sources, g.indices
    if m.kind == "constant":
        p = np.full(len(dst), m.c)
    elif m.kind == "avg_s":
        sums = np.bincount(src, weights=f.susceptibility[dst], minlength=g.n)
        with np.errstate(invalid="ignore", divide="ignore"):
            mean = sums / g.degree
        p = mean[src]
    elif m.kind == "i":
        p = f.influence[src]
    else:
        p = f.influence[src] * f.susceptibility[dst]
    return EdgeProbabilities(g, p)


def neighbor_feature_sums(g: Graph, f: FeatureTable) -> tuple[np.ndarray, np.ndarray]:
    """Per node, the summed influence and summed susceptibility of its neighbors."""
    src, dst = g.arc_sources, g.indices
    sum_i = np.bincount(src, weights=f.influence[dst], minlength=g.n)
    sum_s = np.bincount(src, weights=f.susceptibility[dst], minlength=g.n)
    return sum_i, sum_s
