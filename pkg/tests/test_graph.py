import io

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import clique, graphs, path_graph, to_nx
from hetcascade.graph import (
    Graph,
    GraphFormatError,
    GraphParameterError,
    generate_small_world,
    is_connected,
    largest_component,
    load_edge_list,
    local_clustering,
    serialize_edge_list,
    structural_summary,
)


def test_triangle_parses():
    lg = load_edge_list("0 1\n1 2\n2 0")
    assert lg.graph.n == 3 and lg.graph.num_edges == 3


def test_duplicates_and_self_loops_dropped_and_remapped():
    lg = load_edge_list("5 9\n9 5\n5 5")
    assert lg.graph.n == 2
    assert lg.graph.edges.tolist() == [[0, 1]]
    assert lg.duplicates == 1 and lg.self_loops == 1
    assert lg.labels.tolist() == [5, 9]


def test_comments_and_blank_lines_skipped():
    lg = load_edge_list("# header\n% konect style\n\n3 4\n  \n4 7\n")
    assert lg.graph.n == 3 and lg.graph.num_edges == 2


def test_stream_input():
    assert load_edge_list(io.StringIO("1 2\n")).graph.num_edges == 1


@pytest.mark.parametrize("text, lineno", [
    ("0 1\n1\n", 2),
    ("0 1\n1 2 3\n", 2),
    ("# c\n0 x\n", 2),
    ("0.5 1\n", 1),
])
def test_malformed_line_reports_line_number(text, lineno):
    with pytest.raises(GraphFormatError, match=f"line {lineno}"):
        load_edge_list(text)


@pytest.mark.parametrize("text", ["", "\n\n", "# only a comment\n"])
def test_empty_input_is_an_error(text):
    with pytest.raises(GraphFormatError):
        load_edge_list(text)


@given(graphs(min_n=2, max_n=15))
def test_serialize_round_trip(g):
    g = largest_component(g)[0] if g.num_edges else g
    if g.num_edges == 0:
        return
    back = load_edge_list(serialize_edge_list(g)).graph
    # relabeling follows first appearance, which for sorted edges keeps the structure
    assert nx.is_isomorphic(to_nx(back), to_nx(g))
    assert back.num_edges == g.num_edges


@given(graphs(max_n=12))
def test_csr_consistency(g):
    assert len(g.indices) == 2 * g.num_edges
    assert g.degree.sum() == len(g.indices)
    rev = g.reverse_arc
    assert np.array_equal(rev[rev], np.arange(len(rev)))
    assert np.array_equal(g.arc_sources[rev], g.indices)
    for k, (i, j) in enumerate(zip(g.arc_sources, g.indices)):
        assert g.arc_index(int(i), int(j)) == k
    assert not np.any(g.arc_sources == g.indices)


def test_arc_index_missing():
    with pytest.raises(KeyError):
        path_graph(3).arc_index(0, 2)


# ------------------------------------------------------------ generator


def test_small_world_swp10_counts():
    g = generate_small_world(5000, 8, 0.1, 0)
    s = structural_summary(g)
    assert (s.n, s.l, s.avg_degree) == (5000, 20000, 8.0)


def test_zero_rewiring_is_a_ring():
    g = generate_small_world(10, 2, 0.0, 3)
    assert nx.is_isomorphic(to_nx(g), nx.cycle_graph(10))


def test_full_rewiring_edge_count_and_connectivity():
    g = generate_small_world(20, 4, 1.0, 7)
    assert g.num_edges == 40
    assert is_connected(g) == nx.is_connected(to_nx(g))


@pytest.mark.parametrize("n, k", [(10, 3), (10, 10), (4, 6), (10, -2)])
def test_generator_parameter_errors(n, k):
    with pytest.raises(GraphParameterError):
        generate_small_world(n, k, 0.1, 0)


def test_generator_is_deterministic():
    a = generate_small_world(200, 6, 0.3, 11)
    b = generate_small_world(200, 6, 0.3, 11)
    c = generate_small_world(200, 6, 0.3, 12)
    assert np.array_equal(a.edges, b.edges)
    assert not np.array_equal(a.edges, c.edges)


@settings(max_examples=40, deadline=None)
@given(st.integers(5, 60), st.integers(1, 3), st.floats(0, 1), st.integers(0, 2**32))
def test_generator_invariants(n, half_k, p, seed):
    k = 2 * half_k
    if k >= n:
        return
    g = generate_small_world(n, k, p, seed)
    assert g.n == n and g.num_edges == n * k // 2
    assert len(np.unique(g.edges, axis=0)) == g.num_edges
    assert np.all(g.edges[:, 0] < g.edges[:, 1])


# ------------------------------------------------------------ summaries


def test_triangle_summary():
    s = structural_summary(clique(3))
    assert s.avg_degree == 2.0 and s.clustering == 1.0 and s.transitivity == 1.0


def test_path_assortativity_by_hand():
    # degrees 1,2,2,2,1; both orientations of the 4 edges give x, y below
    s = structural_summary(path_graph(5))
    x = np.array([1, 2, 2, 2, 2, 2, 2, 1], dtype=float)
    y = np.array([2, 1, 2, 2, 2, 2, 1, 2], dtype=float)
    expected = np.mean((x - x.mean()) * (y - y.mean())) / (x.std() * y.std())
    assert s.clustering == 0.0
    assert s.degree_assortativity == pytest.approx(expected, abs=1e-12)
    assert s.degree_assortativity == pytest.approx(-1 / 3, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(graphs(min_n=3, max_n=14))
def test_summary_matches_networkx(g):
    G = to_nx(g)
    s = structural_summary(g)
    assert s.clustering == pytest.approx(nx.average_clustering(G), abs=1e-12)
    assert s.transitivity == pytest.approx(nx.transitivity(G), abs=1e-12)
    assert np.allclose(local_clustering(g), [nx.clustering(G, i) for i in range(g.n)])
    d = g.degree
    if g.num_edges and len(set(d[g.edges.ravel()])) > 1:
        assert s.degree_assortativity == pytest.approx(nx.degree_assortativity_coefficient(G), abs=1e-9)


# ------------------------------------------------------------ components


def test_connected_graph_identity_mapping():
    g = clique(4)
    sub, mapping = largest_component(g)
    assert mapping.tolist() == [0, 1, 2, 3]
    assert np.array_equal(sub.edges, g.edges)


def test_component_tie_goes_to_smallest_id():
    # isolated 0, triangles {4,5,6} and {1,2,3}
    g = Graph.from_edges(7, [(4, 5), (5, 6), (4, 6), (1, 2), (2, 3), (1, 3)])
    sub, mapping = largest_component(g)
    assert mapping.tolist() == [1, 2, 3]
    assert sub.n == 3 and sub.num_edges == 3


@pytest.mark.parametrize("seed", range(5))
def test_largest_component_matches_bfs(seed):
    g = generate_small_world(40, 2, 1.0, seed)
    comps = sorted(nx.connected_components(to_nx(g)), key=lambda c: (-len(c), min(c)))
    _, mapping = largest_component(g)
    assert set(mapping.tolist()) == comps[0]


@given(graphs(max_n=12))
def test_subgraph_keeps_induced_edges(g):
    keep = np.arange(0, g.n, 2)
    sub, mapping = g.subgraph(keep)
    expected = to_nx(g).subgraph(keep.tolist())
    got = {(int(mapping[u]), int(mapping[v])) for u, v in sub.edges}
    assert got == {(min(u, v), max(u, v)) for u, v in expected.edges()}
