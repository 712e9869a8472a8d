import math

import pytest
from hypothesis import given, settings, strategies as st

import fixtures as fx
from oracles import best_separator, min_separator_size
from untangle.geometry import ingest
from untangle.separator import (SeparatorCapError, SeparatorResult, StringGraph, exact_separator,
                                find_separator, heuristic_separator, separator_ratio, side_limit,
                                string_graph, verify_separator)


def graph(n, edges):
    return StringGraph.from_edges(range(n), edges)


def test_plane_drawing_has_empty_string_graph():
    h = string_graph(ingest(fx.triangle()))
    assert h.n == 0 and h.m == 0


def test_convex_k5_string_graph_is_a_five_cycle():
    h = string_graph(ingest(fx.convex_complete(5)))
    assert h.n == 5 and h.m == 5
    assert all(len(nb) == 2 for nb in h.adj.values())


def test_endpoint_sharing_edges_adjacent_only_through_their_crossing():
    g = fx.geo([(0, 0), (10, 0), (6, -5)], [(0, 1), (0, 2, [(5, 5)])])
    h = string_graph(ingest(g))
    assert h.vertices == (0, 1) and h.edge_list() == [(0, 1)]


def test_self_crossings_add_no_loops():
    h = string_graph(ingest(fx.self_loop()))
    assert h.vertices == (0,) and h.m == 0


def test_path_on_three_vertices():
    # {0} is also a minimum separator, but {1} splits the rest evenly
    s = exact_separator(graph(3, [(0, 1), (1, 2)]))
    assert s.f0 == (1,) and (s.f1, s.f2) == ((0,), (2,))
    assert verify_separator(graph(3, [(0, 1), (1, 2)]), s).ok


def test_two_isolated_vertices():
    h = graph(2, [])
    s = exact_separator(h)
    assert s.f0 == () and {s.f1, s.f2} == {(0,), (1,)}
    assert s.balance == 0.5


def test_triangle_needs_one_vertex():
    h = graph(3, [(0, 1), (1, 2), (0, 2)])
    s = exact_separator(h)
    assert s.f0 == (0,) and verify_separator(h, s).ok


def test_edgeless_heuristic():
    h = graph(7, [])
    s = heuristic_separator(h, seed=3)
    assert s.f0 == () and verify_separator(h, s).ok


def test_star_heuristic_finds_the_centre():
    h = graph(10, [(0, i) for i in range(1, 10)])
    s = heuristic_separator(h, seed=1)
    assert s.f0 == (0,) and verify_separator(h, s).ok
    assert min_separator_size(h.vertices, h.adj) == 1


def test_exact_cap_enforced():
    with pytest.raises(SeparatorCapError):
        exact_separator(graph(6, []), cap=5)


def test_find_separator_switches_on_cap():
    h = graph(6, [(i, i + 1) for i in range(5)])
    assert find_separator(h, exact_cap=6).method == "exact"
    assert find_separator(h, exact_cap=5).method == "heuristic"


def test_verify_flags_cross_edges_and_balance():
    h = graph(3, [(0, 1), (1, 2)])
    good = exact_separator(h)
    assert verify_separator(h, good).ok
    crossed = SeparatorResult((), (0,), (1, 2), 0.0, 2 / 3, "x")
    assert "cross edge" in verify_separator(h, crossed).kinds()
    big = graph(6, [])
    oversize = SeparatorResult((), (0, 1, 2, 3, 4), (5,), 0.0, 5 / 6, "x")
    assert "balance" in verify_separator(big, oversize).kinds()
    wrong_ratio = SeparatorResult((1,), (0,), (2,), 3.0, 1 / 3, "x")
    assert "ratio" in verify_separator(h, wrong_ratio).kinds()
    missing = SeparatorResult((), (0,), (), 0.0, 1 / 3, "x")
    assert "partition" in verify_separator(h, missing).kinds()


def test_ratio_and_limit_helpers():
    assert side_limit(3) == 2 and side_limit(10) == 6
    assert separator_ratio(2, 4) == 1.0
    assert separator_ratio(0, 0) == 0.0
    assert math.isinf(separator_ratio(1, 0))


def test_result_serializes_infinite_ratio():
    s = SeparatorResult((0,), (), (), math.inf, 0.0, "exact")
    assert s.to_dict()["ratio"] == "inf"


small_graphs = st.integers(1, 11).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n)))


@settings(max_examples=120, deadline=None)
@given(small_graphs)
def test_exact_matches_subset_oracle(spec):
    n, edges = spec
    h = graph(n, edges)
    s = exact_separator(h)
    size, side = best_separator(h.vertices, h.adj)
    assert len(s.f0) == size
    assert max(len(s.f1), len(s.f2)) == side
    assert verify_separator(h, s).ok


@settings(max_examples=60, deadline=None)
@given(small_graphs, st.integers(0, 100))
def test_heuristic_valid_and_never_below_exact(spec, seed):
    n, edges = spec
    h = graph(n, edges)
    s = heuristic_separator(h, restarts=3, seed=seed)
    assert verify_separator(h, s).ok
    assert len(s.f0) >= len(exact_separator(h).f0)


def test_heuristic_is_deterministic():
    h = graph(20, [(i, (i * 7 + 3) % 20) for i in range(20)] + [(i, i + 1) for i in range(19)])
    assert heuristic_separator(h, seed=9) == heuristic_separator(h, seed=9)


def test_heuristic_on_a_grid_is_reasonable():
    side = 6
    edges = [(r * side + c, r * side + c + 1) for r in range(side) for c in range(side - 1)]
    edges += [(r * side + c, (r + 1) * side + c) for r in range(side - 1) for c in range(side)]
    h = graph(side * side, edges)
    s = heuristic_separator(h, seed=0)
    assert verify_separator(h, s).ok
    assert len(s.f0) <= 2 * side
