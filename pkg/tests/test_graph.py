import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynapsp.errors import MalformedUpdateError, ModeError, StalePriceError
from dynapsp.graph import (
    FORWARD,
    HOP_BASE,
    INF,
    LEX_INF,
    REVERSE,
    DynamicGraph,
    LexWeight,
    bfs_tree,
    dijkstra,
    dijkstra_many,
    feasible_price_function,
    hop_bounded_bellman_ford,
    is_feasible,
    walk_length,
)

from oracles import brute_lex, has_negative_cycle, hop_dp

G4_EDGES = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 5)]


def g4():
    return DynamicGraph(4, G4_EDGES)


@st.composite
def small_graphs(draw, max_n=7, lo=0, hi=9, unit=False):
    n = draw(st.integers(2, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=min(len(pairs), 3 * n)))
    edges = [(u, v, 1 if unit else draw(st.integers(lo, hi))) for u, v in chosen]
    return n, edges


@st.composite
def potential_graphs(draw, max_n=7):
    """Graphs with negative edges but a hidden feasible potential."""
    n, edges = draw(small_graphs(max_n=max_n, lo=0, hi=9))
    phi = draw(st.lists(st.integers(0, 6), min_size=n, max_size=n))
    return n, [(u, v, w + phi[v] - phi[u]) for u, v, w in edges]


def lex(key):
    return LexWeight.from_key(key)


def test_lex_weight_order_and_packing():
    assert LexWeight(3, 1) < LexWeight(3, 2) < LexWeight(4, 0)
    assert LexWeight(-2, 7).key == -2 * HOP_BASE + 7
    assert LexWeight.from_key(LexWeight(-2, 7).key) == LexWeight(-2, 7)
    assert LexWeight(1, 1) + LEX_INF == LEX_INF
    assert LexWeight.from_key(INF).is_inf


def test_vertex_update_removes_all_incident_edges():
    g = g4()
    ch = g.apply_vertex_update(1, [], [])
    assert g.m == 2
    assert sorted(ch.removed) == [(0, 1, 1), (1, 2, 1)]
    assert not g.has_edge(0, 1) and not g.has_edge(1, 2)
    assert g.version == 1


def test_vertex_update_installs_new_edges():
    g = g4()
    g.apply_vertex_update(2, [(0, -3)], [(3, 4), (1, 2)])
    assert g.weight(2, 0) == -3 and g.weight(3, 2) == 4 and g.weight(1, 2) == 2
    assert not g.has_edge(2, 3)
    assert list(g.in_adj[2]) == [1, 3]


@pytest.mark.parametrize(
    "out,inn",
    [([(1, 1), (1, 2)], []), ([(0, 1)], []), ([(9, 1)], []), ([], [(1, 2**62)]), ([(1, 1.5)], [])],
)
def test_malformed_updates_rejected(out, inn):
    g = g4()
    with pytest.raises(MalformedUpdateError):
        g.apply_vertex_update(0, out, inn)
    assert g.edges() == sorted(G4_EDGES)


def test_parallel_edges_rejected():
    with pytest.raises(MalformedUpdateError):
        DynamicGraph(2, [(0, 1, 1), (0, 1, 2)])


def test_dijkstra_g4_examples():
    t = dijkstra(g4(), 0)
    assert t.lex(3) == LexWeight(3, 3)
    assert t.path(3) == [0, 1, 2, 3]
    t = dijkstra(g4(), 0, forbidden={1})
    assert t.lex(3) == LexWeight(5, 1)
    assert t.path(3) == [0, 3]


def test_reverse_tree_path_is_in_travel_order():
    t = dijkstra(g4(), 3, REVERSE)
    assert t.lex(0) == LexWeight(3, 3)
    assert t.path(0) == [0, 1, 2, 3]


def test_dijkstra_detects_stale_prices():
    g = DynamicGraph(2, [(0, 1, -1)])
    with pytest.raises(StalePriceError):
        dijkstra(g, 0)
    assert dijkstra(g, 0, prices=[0, -1]).lex(1) == LexWeight(-1, 1)


def test_hop_bounded_g4_examples():
    assert hop_bounded_bellman_ford(g4(), 0, 2).lex(3) == LexWeight(5, 1)
    table = hop_bounded_bellman_ford(g4(), 0, 3)
    assert table.lex(3) == LexWeight(3, 3)
    assert table.path(3) == [0, 1, 2, 3]


def test_bfs_requires_unit_weights():
    with pytest.raises(ModeError):
        bfs_tree(g4(), 0)


@settings(max_examples=60, deadline=None)
@given(potential_graphs())
def test_dijkstra_with_prices_matches_brute_force(data):
    n, edges = data
    g = DynamicGraph(n, edges)
    pf = feasible_price_function(g)
    assert pf.feasible and is_feasible(g, pf.p)
    for s in range(n):
        tree = dijkstra(g, s, prices=pf.p)
        for t in range(n):
            want = brute_lex(n, edges, s, t)
            got = tree.lex(t)
            assert (got.length, got.hops) == want or (got.is_inf and want[0] == math.inf)
            if not got.is_inf:
                assert walk_length(g, tree.path(t)) == got


@settings(max_examples=60, deadline=None)
@given(potential_graphs(), st.data())
def test_dijkstra_many_equals_single_source(data, draw):
    n, edges = data
    g = DynamicGraph(n, edges)
    p = feasible_price_function(g).p
    forbidden = set(draw.draw(st.lists(st.integers(0, n - 1), max_size=2)))
    sources = [v for v in range(n) if v not in forbidden]
    for direction in (FORWARD, REVERSE):
        many = dijkstra_many(g, sources, direction, p, forbidden)
        for s, tree in zip(sources, many):
            one = dijkstra(g, s, direction, p, forbidden)
            assert tree.dist == one.dist
            assert tree.parent == one.parent


def test_dijkstra_many_falls_back_on_huge_weights():
    g = DynamicGraph(3, [(0, 1, 2**40), (1, 2, 2**40), (0, 2, 2**41 + 1)])
    trees = dijkstra_many(g, [0, 1])
    assert trees[0].lex(2) == LexWeight(2**41, 2)
    assert trees[0].dist == dijkstra(g, 0).dist


@settings(max_examples=60, deadline=None)
@given(small_graphs(unit=True))
def test_bfs_equals_dijkstra_on_unit_graphs(data):
    n, edges = data
    g = DynamicGraph(n, edges)
    for s in range(n):
        for direction in (FORWARD, REVERSE):
            a, b = bfs_tree(g, s, direction), dijkstra(g, s, direction)
            assert a.dist == b.dist and a.parent == b.parent


@settings(max_examples=80, deadline=None)
@given(small_graphs(lo=-4, hi=9), st.integers(1, 6))
def test_hop_bounded_matches_dp(data, h):
    n, edges = data
    g = DynamicGraph(n, edges)
    for s in range(n):
        table = hop_bounded_bellman_ford(g, s, h)
        want = hop_dp(n, edges, s, h)
        for t in range(n):
            got = table.lex(t)
            if want[t][0] == math.inf:
                assert got.is_inf
                continue
            assert (got.length, got.hops) == want[t]
            walk = table.path(t)
            assert walk[0] == s and walk[-1] == t
            assert walk_length(g, walk) == got


@settings(max_examples=120, deadline=None)
@given(small_graphs(lo=-6, hi=6))
def test_price_function_or_negative_cycle(data):
    n, edges = data
    g = DynamicGraph(n, edges)
    pf = feasible_price_function(g)
    assert pf.feasible == (not has_negative_cycle(n, edges))
    if pf.feasible:
        assert is_feasible(g, pf.p)
    else:
        cyc = pf.negative_cycle
        assert cyc[0] == cyc[-1]
        assert len(set(cyc[:-1])) == len(cyc) - 1
        assert walk_length(g, cyc).length < 0
