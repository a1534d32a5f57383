import random

import pytest

from agreement_forest.dfvs import (
    EDGE,
    VERTEX,
    FvsSolution,
    WeightedDigraph,
    is_acyclic,
    is_fvs,
    is_proper,
    minimalize,
    properize,
    solve_dfvs_exact,
    solve_dfvs_greedy,
)
from agreement_forest.oracle import brute_dfvs

from conftest import random_digraph


def two_cycle(wu=1, wv=2):
    g = WeightedDigraph()
    g.add_vertex("u", wu)
    g.add_vertex("v", wv)
    g.add_edge("u", "v")
    g.add_edge("v", "u")
    return g


def test_is_acyclic_examples():
    assert is_acyclic(WeightedDigraph())
    assert not is_acyclic(two_cycle())
    g = WeightedDigraph()
    for u, v in [(0, 1), (1, 2), (0, 2)]:
        g.add_edge(u, v)
    assert is_acyclic(g)


def test_exact_examples():
    g = WeightedDigraph()
    g.add_edge(0, 1)
    assert solve_dfvs_exact(g) == FvsSolution(frozenset(), 0)
    assert solve_dfvs_exact(two_cycle()) == FvsSolution(frozenset({"u"}), 1)


def test_self_loop_forced():
    g = two_cycle()
    g.add_vertex("x", 5)
    g.add_edge("x", "x")
    sol = solve_dfvs_exact(g)
    assert "x" in sol.vertices and sol.weight == 6


def test_zero_weight_vertices_are_free():
    g = two_cycle(0, 4)
    assert solve_dfvs_exact(g).weight == 0


def test_exact_matches_brute_force():
    rng = random.Random(8)
    for _ in range(200):
        g = random_digraph(rng, 8, p=rng.choice([0.15, 0.3]), loops=rng.random() < 0.2)
        exact = solve_dfvs_exact(g)
        assert is_fvs(g, exact.vertices)
        assert exact.weight == brute_dfvs(g).weight


def test_greedy_examples_and_validity():
    g = WeightedDigraph()
    g.add_edge(0, 1)
    assert solve_dfvs_greedy(g).vertices == frozenset()
    assert solve_dfvs_greedy(two_cycle()).vertices == {"u"}
    rng = random.Random(9)
    for _ in range(100):
        g = random_digraph(rng, 9, p=0.3)
        greedy = solve_dfvs_greedy(g)
        assert is_fvs(g, greedy.vertices)
        assert greedy.weight >= solve_dfvs_exact(g).weight


def test_minimalize():
    g = two_cycle()
    assert len(minimalize(g, {"u", "v"}).vertices) == 1
    assert minimalize(g, {"u"}).vertices == {"u"}
    with pytest.raises(ValueError):
        minimalize(g, set())
    rng = random.Random(10)
    for _ in range(50):
        g = random_digraph(rng, 7, p=0.35)
        m = minimalize(g, g.vertices)
        assert is_fvs(g, m.vertices)
        assert all(not is_fvs(g, m.vertices - {v}) for v in m.vertices)


def forest_like():
    # vertex r with two child edges, each closing a cycle back to r
    g = WeightedDigraph()
    g.add_vertex("r", 1, VERTEX)
    g.add_vertex("e1", 1, EDGE)
    g.add_vertex("e2", 1, EDGE)
    for u, v in [("r", "e1"), ("r", "e2"), ("e1", "r"), ("e2", "r")]:
        g.add_edge(u, v)
    return g


def test_properize_swaps_children_for_vertex():
    g = forest_like()
    f = FvsSolution.of(g, {"e1", "e2"})
    assert f.weight == 2 and not is_proper(g, f)
    p = properize(g, f)
    assert p.vertices == {"r"} and p.weight == 1
    assert is_proper(g, p)


def test_properize_keeps_proper_sets():
    g = forest_like()
    f = FvsSolution.of(g, {"r"})
    assert properize(g, f) == f


def test_properize_needs_tags():
    with pytest.raises(ValueError):
        properize(two_cycle(), FvsSolution.of(two_cycle(), {"u"}))


def test_edgelist_round_trip():
    g = forest_like()
    text = g.to_edgelist()
    h = WeightedDigraph.from_edgelist(text)
    assert len(h) == len(g) and len(h.edges()) == len(g.edges())
    assert [h.weight(v) for v in h.vertices] == [g.weight(v) for v in g.vertices]
    assert [h.tags[v] for v in h.vertices] == [g.tags[v] for v in g.vertices]
    assert solve_dfvs_exact(h).weight == solve_dfvs_exact(g).weight
    with pytest.raises(ValueError):
        WeightedDigraph.from_edgelist("x 1 2\n")


def test_negative_weight_rejected():
    with pytest.raises(ValueError):
        WeightedDigraph().add_vertex("a", -1)
