import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import clique, graphs_with_p, path_graph, random_graph, random_p
from hetcascade.cascade import (
    CapacityError,
    estimate_spread,
    exact_spread,
    per_node_capacity,
    simulate_cascade,
    spread_sizes,
)
from hetcascade.features import EdgeProbabilities
from hetcascade.graph import Graph, generate_small_world


def brute_force_spread(g: Graph, p: EdgeProbabilities, seeds) -> float:
    """Sum over every live/dead assignment of every arc; plain BFS per configuration."""
    arcs = list(zip(g.arc_sources.tolist(), g.indices.tolist(), p.p.tolist()))
    total = 0.0
    for live in itertools.product((False, True), repeat=len(arcs)):
        prob = 1.0
        adj = {}
        for (i, j, pij), on in zip(arcs, live):
            prob *= pij if on else 1 - pij
            if on:
                adj.setdefault(i, []).append(j)
        if prob == 0:
            continue
        seen, stack = set(seeds), list(seeds)
        while stack:
            for v in adj.get(stack.pop(), []):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        total += prob * len(seen)
    return total


def edge_p(g, mapping):
    return EdgeProbabilities(g, np.array([mapping.get(a, 0.0) for a in zip(g.arc_sources.tolist(), g.indices.tolist())]))


# ------------------------------------------------------------ single runs


def test_isolated_seed():
    g = Graph.from_edges(3, [(1, 2)])
    out = simulate_cascade(g, EdgeProbabilities.uniform(g, 1.0), {0}, 1)
    assert out.infected == {0} and out.rounds == 0


def test_certain_and_impossible_edges():
    g = Graph.from_edges(2, [(0, 1)])
    assert simulate_cascade(g, EdgeProbabilities.uniform(g, 1.0), {0}, 5).infected == {0, 1}
    assert simulate_cascade(g, EdgeProbabilities.uniform(g, 0.0), {0}, 5).infected == {0}


def test_wave_count_on_path():
    g = path_graph(6)
    out = simulate_cascade(g, EdgeProbabilities.uniform(g, 1.0), [0], 0)
    assert out.infected == set(range(6)) and out.rounds == 5


def test_seed_errors():
    g = path_graph(3)
    p = EdgeProbabilities.uniform(g, 0.5)
    with pytest.raises(ValueError, match="empty"):
        simulate_cascade(g, p, [], 0)
    with pytest.raises(ValueError):
        estimate_spread(g, p, [3], 10, 0)
    with pytest.raises(ValueError):
        estimate_spread(g, p, [0], 0, 0)


# ------------------------------------------------------------ Monte Carlo


def test_certain_pair_is_exact():
    g = Graph.from_edges(2, [(0, 1)])
    est = estimate_spread(g, EdgeProbabilities.uniform(g, 1.0), [0], 37, 3)
    assert est.mean_fraction == 1.0 and est.std_dev == 0.0 and est.runs == 37


def test_half_edge_mean():
    g = Graph.from_edges(2, [(0, 1)])
    p = edge_p(g, {(0, 1): 0.5})
    sizes = spread_sizes(g, p, [0], 100_000, 1)
    assert abs(sizes.mean() - 1.5) < 0.01


def test_path_mean_within_three_sigma():
    g = path_graph(3)
    est = estimate_spread(g, EdgeProbabilities.uniform(g, 0.5), [0], 20_000, 2, denominator=1)
    assert abs(est.mean_fraction - 1.75) <= 3 * est.std_dev / np.sqrt(est.runs)
    lo, hi = est.ci95
    assert lo < est.mean_fraction < hi


def test_capacity_examples():
    g = Graph.from_edges(5, [])
    cap = per_node_capacity(g, EdgeProbabilities.uniform(g, 0.5), 10, 0)
    assert np.allclose(cap.mean, 1 / 5) and np.all(cap.std == 0)
    k = clique(5)
    assert np.all(per_node_capacity(k, EdgeProbabilities.uniform(k, 1.0), 10, 0).mean == 1.0)


def test_capacity_matches_exact_on_six_nodes():
    rng = np.random.default_rng(6)
    g = random_graph(rng, 6, 8, connected=True)
    p = random_p(g, rng)
    runs = 20_000
    cap = per_node_capacity(g, p, runs, 77)
    for i in range(6):
        exact = exact_spread(g, p, [i]) / 6
        assert abs(cap.mean[i] - exact) <= 3 * cap.std[i] / np.sqrt(runs) + 1e-12


@settings(max_examples=20, deadline=None)
@given(graphs_with_p(max_n=6), st.integers(0, 2**40))
def test_capacity_entry_equals_single_seed_estimate(gp, seed):
    g, p = gp
    cap = per_node_capacity(g, p, 50, seed)
    for i in range(g.n):
        est = estimate_spread(g, p, [i], 50, seed, stream=i)
        assert cap.mean[i] == pytest.approx(est.mean_fraction, abs=1e-15)
        assert cap.std[i] == pytest.approx(est.std_dev, abs=1e-12)


def test_determinism():
    g = generate_small_world(200, 6, 0.2, 1)
    p = random_p(g, np.random.default_rng(1))
    a = estimate_spread(g, p, [0, 5, 9], 300, 42)
    b = estimate_spread(g, p, [9, 0, 5], 300, 42)
    assert a == b
    assert a != estimate_spread(g, p, [0, 5, 9], 300, 43)
    c1, c2 = per_node_capacity(g, p, 20, 8), per_node_capacity(g, p, 20, 8)
    assert np.array_equal(c1.mean, c2.mean) and np.array_equal(c1.std, c2.std)


# ------------------------------------------------------------ exact oracle


def test_exact_examples():
    g = Graph.from_edges(2, [(0, 1)])
    assert exact_spread(g, EdgeProbabilities.uniform(g, 0.5), [0]) == pytest.approx(1.5)
    assert exact_spread(clique(3), EdgeProbabilities.uniform(clique(3), 1.0), [0]) == 3.0
    path = path_graph(3)
    p = edge_p(path, {(0, 1): 0.3, (1, 2): 0.7, (1, 0): 0.5, (2, 1): 0.5})
    assert exact_spread(path, p, [0]) == pytest.approx(1.51)


@settings(max_examples=40, deadline=None)
@given(graphs_with_p(max_n=5), st.data())
def test_exact_matches_brute_force(gp, data):
    g, p = gp
    if len(g.indices) > 12:
        return
    seeds = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=g.n))
    assert exact_spread(g, p, seeds) == pytest.approx(brute_force_spread(g, p, seeds), abs=1e-9)


def test_exact_capacity_limit():
    g = clique(6)  # 30 arcs
    with pytest.raises(CapacityError):
        exact_spread(g, EdgeProbabilities.uniform(g, 0.5), [0])
    # deterministic arcs do not count against the limit
    assert exact_spread(g, EdgeProbabilities.uniform(g, 1.0), [0]) == 6.0


def test_exact_small_chunks_agree():
    rng = np.random.default_rng(3)
    g = random_graph(rng, 7, 9, connected=True)
    p = random_p(g, rng)
    assert exact_spread(g, p, [0], chunk_bits=3) == pytest.approx(exact_spread(g, p, [0]), abs=1e-12)


# ------------------------------------------------------------ coupling


@settings(max_examples=40, deadline=None)
@given(graphs_with_p(min_n=2, max_n=10), st.data())
def test_raising_probabilities_never_shrinks_outbreak(gp, data):
    g, p = gp
    bump = np.array(data.draw(st.lists(st.floats(0, 1), min_size=len(p.p), max_size=len(p.p))), dtype=float)
    q = EdgeProbabilities(g, np.maximum(p.p, bump))
    seeds = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=3))
    seed = data.draw(st.integers(0, 2**40))
    for run in range(5):
        low = simulate_cascade(g, p, seeds, seed, run=run).infected
        high = simulate_cascade(g, q, seeds, seed, run=run).infected
        assert low <= high


@settings(max_examples=40, deadline=None)
@given(graphs_with_p(min_n=2, max_n=10), st.data())
def test_seed_set_monotone(gp, data):
    g, p = gp
    s1 = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=3))
    s2 = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=3))
    seed = data.draw(st.integers(0, 2**40))
    for run in range(5):
        a = simulate_cascade(g, p, s1, seed, run=run).infected
        b = simulate_cascade(g, p, s1 | s2, seed, run=run).infected
        assert a <= b


def test_spread_sizes_match_single_runs():
    g = generate_small_world(60, 4, 0.3, 0)
    p = random_p(g, np.random.default_rng(0))
    sizes = spread_sizes(g, p, [3, 7], 25, 9, stream=4)
    singles = [len(simulate_cascade(g, p, [3, 7], 9, stream=4, run=r).infected) for r in range(25)]
    assert sizes.tolist() == singles
