"""Undirected simple graphs in CSR form, edge-list I/O and structural summaries."""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph


class GraphFormatError(ValueError):
    """Raised for malformed edge-list input."""


class GraphParameterError(ValueError):
    """Raised for invalid generator parameters."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph with node ids ``0..n-1``.

    ``edges`` is an (L, 2) array with ``u < v`` in each row, sorted
    lexicographically.  Neighbors live in CSR arrays ``indptr``/``indices``
    (sorted per row); CSR position ``k`` in row ``i`` is the arc ``i -> indices[k]``,
    which is how per-arc arrays (probabilities, weights) are aligned.
    """

    n: int
    edges: np.ndarray
    indptr: np.ndarray = field(repr=False)
    indices: np.ndarray = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, edges) -> Graph:
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint outside 0..n-1")
        e = np.sort(e, axis=1)
        e = e[e[:, 0] != e[:, 1]]
        e = np.unique(e, axis=0) if len(e) else e.reshape(0, 2)
        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((dst, src))
        indices = dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        for a in (e, indptr, indices):
            a.setflags(write=False)
        return cls(int(n), e, indptr, indices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def degree(self) -> np.ndarray:
        d = np.diff(self.indptr)
        d.setflags(write=False)
        return d

    @cached_property
    def arc_sources(self) -> np.ndarray:
        """Source node of every CSR arc."""
        return np.repeat(np.arange(self.n, dtype=np.int64), self.degree)

    @cached_property
    def reverse_arc(self) -> np.ndarray:
        """``reverse_arc[k]`` is the CSR position of the arc opposite to ``k``."""
        # arcs ordered by (dst, src) are exactly the reversed arcs in CSR order
        order = np.lexsort((self.arc_sources, self.indices))
        rev = np.empty_like(order)
        rev[order] = np.arange(len(order))
        rev.setflags(write=False)
        return rev

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def arc_index(self, i: int, j: int) -> int:
        """CSR position of arc ``i -> j``; KeyError if the edge is absent."""
        lo, hi = self.indptr[i], self.indptr[i + 1]
        k = lo + int(np.searchsorted(self.indices[lo:hi], j))
        if k >= hi or self.indices[k] != j:
            raise KeyError((i, j))
        return int(k)

    def adjacency(self) -> sparse.csr_matrix:
        data = np.ones(len(self.indices))
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def subgraph(self, nodes) -> tuple[Graph, np.ndarray]:
        """Induced subgraph; returns it and the sorted original ids (new id -> old id)."""
        keep = np.unique(np.asarray(nodes, dtype=np.int64))
        new_id = np.full(self.n, -1, dtype=np.int64)
        new_id[keep] = np.arange(len(keep))
        e = new_id[self.edges]
        e = e[(e >= 0).all(axis=1)]
        return Graph.from_edges(len(keep), e), keep


@dataclass(frozen=True)
class LoadedGraph:
    graph: Graph
    labels: np.ndarray
    """Original id of every node, in first-appearance order."""
    duplicates: int
    self_loops: int


def load_edge_list(text) -> LoadedGraph:
    """Parse a whitespace edge list.

    ``text`` may be a string or a readable text stream.  Lines starting with
    ``#`` or ``%`` and blank lines are skipped; every other line must hold
    exactly two integer tokens.  Node labels are remapped to ``0..n-1`` in
    first-appearance order; duplicate edges and self-loops are dropped and counted.
    """
    stream = io.StringIO(text) if isinstance(text, str) else text
    labels: dict[int, int] = {}
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    duplicates = self_loops = 0
    for lineno, line in enumerate(stream, start=1):
        s = line.strip()
        if not s or s[0] in "#%":
            continue
        parts = s.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected two tokens, got {len(parts)}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer token in {s!r}") from None
        u = labels.setdefault(a, len(labels))
        v = labels.setdefault(b, len(labels))
        if u == v:
            self_loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        edges.append(key)
    if not labels:
        raise GraphFormatError("empty edge list")
    g = Graph.from_edges(len(labels), edges)
    return LoadedGraph(g, np.fromiter(labels, dtype=np.int64, count=len(labels)), duplicates, self_loops)


def read_edge_list(path: str | os.PathLike) -> LoadedGraph:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh)


def serialize_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges.tolist())


def generate_small_world(n: int, k: int, rewire_p: float, rng_seed: int) -> Graph:
    """Watts-Strogatz graph: ring lattice of ``k`` nearest neighbors, then rewiring.

    Each lattice edge ``(u, u+j)`` is, with probability ``rewire_p``, replaced
    by ``(u, w)`` for a uniformly chosen ``w`` that is neither ``u`` nor already
    adjacent to ``u``.  The edge count stays exactly ``n*k/2``.
    """
    if k % 2 or k < 0:
        raise GraphParameterError(f"k must be even and non-negative, got {k}")
    if k >= n:
        raise GraphParameterError(f"k must be smaller than n ({k} >= {n})")
    if not 0.0 <= rewire_p <= 1.0:
        raise GraphParameterError(f"rewire_p must lie in [0, 1], got {rewire_p}")
    rng = np.random.default_rng(rng_seed)
    adj = [set() for _ in range(n)]
    for u in range(n):
        for j in range(1, k // 2 + 1):
            v = (u + j) % n
            adj[u].add(v)
            adj[v].add(u)
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            if rng.random() >= rewire_p or len(adj[u]) >= n - 1:
                continue
            w = int(rng.integers(n))
            while w == u or w in adj[u]:
                w = int(rng.integers(n))
            adj[u].discard(v)
            adj[v].discard(u)
            adj[u].add(w)
            adj[w].add(u)
    edges = [(u, v) for u in range(n) for v in adj[u] if u < v]
    return Graph.from_edges(n, edges)


def largest_component(g: Graph) -> tuple[Graph, np.ndarray]:
    """Induced subgraph on the largest connected component.

    Size ties go to the component holding the smallest node id.  Returns the
    subgraph and ``mapping`` with ``mapping[new_id] = old_id``.
    """
    _, labels = csgraph.connected_components(g.adjacency(), directed=False)
    sizes = np.bincount(labels)
    # labels are assigned in order of first node, so argmax picks the smallest id on ties
    best = int(np.argmax(sizes))
    return g.subgraph(np.flatnonzero(labels == best))


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return csgraph.connected_components(g.adjacency(), directed=False)[0] == 1


@dataclass(frozen=True)
class StructuralSummary:
    n: int
    l: int
    avg_degree: float
    degree_assortativity: float
    clustering: float
    transitivity: float


def local_clustering(g: Graph) -> np.ndarray:
    a = g.adjacency()
    tri = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() / 2.0
    d = g.degree.astype(float)
    pairs = d * (d - 1) / 2.0
    out = np.zeros(g.n)
    np.divide(tri, pairs, out=out, where=pairs > 0)
    return out


def structural_summary(g: Graph) -> StructuralSummary:
    """N, L, mean degree, degree assortativity and clustering.

    Assortativity is the Pearson correlation of end-point degrees over both
    orientations of every edge (0 when all end-point degrees coincide).
    ``clustering`` is the mean local coefficient with degree<2 nodes counted as
    0; ``transitivity`` (3 x triangles / connected triples) is reported alongside.
    """
    d = g.degree.astype(float)
    if g.num_edges:
        x = np.concatenate([d[g.edges[:, 0]], d[g.edges[:, 1]]])
        y = np.concatenate([d[g.edges[:, 1]], d[g.edges[:, 0]]])
        sx = x.std()
        r = 0.0 if sx == 0 else float(np.mean((x - x.mean()) * (y - y.mean())) / (sx * y.std()))
    else:
        r = 0.0
    cc = local_clustering(g)
    triples = float(np.sum(d * (d - 1) / 2.0))
    tri = float(np.sum(cc * d * (d - 1) / 2.0))
    return StructuralSummary(
        n=g.n,
        l=g.num_edges,
        avg_degree=2.0 * g.num_edges / g.n,
        degree_assortativity=r,
        clustering=float(cc.mean()),
        transitivity=tri / triples if triples else 0.0,
    )
