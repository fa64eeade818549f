import random
from functools import lru_cache

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from fvskernel.elim import (
    EliminationForest,
    compute_elimination_forest,
    elimination_distance_to_forest,
    format_elimination_forest,
    parse_elimination_forest,
    tree_decomposition_from_elimination_forest,
    validate_elimination_forest,
    validate_tree_decomposition,
)
from fvskernel.errors import InputError, ParseError
from fvskernel.graph import Graph

import invariants
from conftest import complete, path, random_graph


def reference_ed(g: Graph) -> int:
    """Plain recursion on networkx graphs, sharing no code with the library."""
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges())

    @lru_cache(maxsize=None)
    def ed(vs: frozenset) -> int:
        if not vs or nx.is_forest(h.subgraph(vs)):
            return 0
        sub = h.subgraph(vs)
        comps = [frozenset(c) for c in nx.connected_components(sub)]
        if len(comps) > 1:
            return max(ed(c) for c in comps)
        return 1 + min(ed(vs - {v}) for v in vs)

    return ed(frozenset(g.vertices))


def test_examples():
    assert elimination_distance_to_forest(path(6)) == 0
    assert elimination_distance_to_forest(complete(3)) == 1
    assert elimination_distance_to_forest(complete(4)) == 2
    assert elimination_distance_to_forest(Graph.from_edges(0)) == 0
    ef = compute_elimination_forest(Graph.from_edges(0), 0)
    assert ef.nodes == []


def test_cap_exceeded_returns_none():
    assert elimination_distance_to_forest(complete(6), cap=2) is None
    assert compute_elimination_forest(complete(6), 2) is None


def test_k3_and_k4_width():
    for g, eta, width in [(complete(3), 1, 2), (complete(4), 2, 3)]:
        ef = compute_elimination_forest(g, eta)
        td = tree_decomposition_from_elimination_forest(g, ef)
        assert validate_tree_decomposition(g, td).ok
        assert td.width <= width


def test_violations_are_itemized():
    g = path(3)
    ef = EliminationForest({0: None, 1: 0}, {0: frozenset({1}), 1: frozenset({0, 1, 2})})
    rules = {r for r, _ in validate_elimination_forest(g, ef, 2).violations}
    assert "partition" in rules
    # edge 1-2 between two sibling leaves
    ef = EliminationForest(
        {0: None, 1: 0, 2: 0},
        {0: frozenset({0}), 1: frozenset({1}), 2: frozenset({2})},
    )
    rules = {r for r, _ in validate_elimination_forest(g, ef, 1).violations}
    assert rules == {"ancestry"}


def test_cyclic_leaf_and_wide_internal_bag():
    g = complete(3)
    ef = EliminationForest({0: None}, {0: frozenset({0, 1, 2})})
    assert {r for r, _ in validate_elimination_forest(g, ef, 0).violations} == {"leaf"}
    ef = EliminationForest({0: None, 1: 0}, {0: frozenset({0, 1}), 1: frozenset({2})})
    assert "singleton" in {r for r, _ in validate_elimination_forest(g, ef, 1).violations}


def test_height_rule():
    ef = compute_elimination_forest(complete(4), 2)
    assert not validate_elimination_forest(complete(4), ef, 1)


def test_decomposition_rejects_invalid_forest():
    ef = EliminationForest({0: None}, {0: frozenset({0, 1, 2})})
    with pytest.raises(InputError):
        tree_decomposition_from_elimination_forest(complete(3), ef)


@st.composite
def small_graphs(draw, max_n=8):
    n = draw(st.integers(0, max_n))
    seed = draw(st.integers(0, 10**6))
    p = draw(st.floats(0.1, 0.7))
    return random_graph(random.Random(seed), n, p)


@settings(max_examples=120, deadline=None)
@given(small_graphs())
def test_round_trip_and_width_chain(g):
    eta = elimination_distance_to_forest(g)
    ef = compute_elimination_forest(g, eta)
    assert validate_elimination_forest(g, ef, eta).ok
    assert ef.height == eta
    td = tree_decomposition_from_elimination_forest(g, ef)
    assert validate_tree_decomposition(g, td).ok
    assert td.width <= ef.height + 1


@settings(max_examples=120, deadline=None)
@given(small_graphs())
def test_matches_definition_recursion(g):
    eta = elimination_distance_to_forest(g)
    assert eta == reference_ed(g)
    if eta > 0:
        assert compute_elimination_forest(g, eta - 1) is None


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=7))
def test_minimum_fvs_takes_at_most_height_from_a_leaf_bag(g):
    invariants.leaf_bag_cap(g)


@settings(max_examples=120, deadline=None)
@given(small_graphs())
def test_paths_leave_a_leaf_bag_through_its_tail(g):
    invariants.tail_separates_leaf(g)


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=7))
def test_few_children_see_a_non_optimal_restriction(g):
    invariants.few_suboptimal_children(g)


def test_serialization_round_trip():
    g = Graph.from_edges(7, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3), (5, 6)])
    ef = compute_elimination_forest(g, 2)
    again = parse_elimination_forest(format_elimination_forest(ef))
    assert again == ef
    assert validate_elimination_forest(g, again, 2).ok


@pytest.mark.parametrize("text", ["node 0 parent\n", "node a parent - bag 1\n", "node 0 parent - bag 1\nnode 0 parent - bag 2\n"])
def test_forest_parse_errors(text):
    with pytest.raises(ParseError, match="line"):
        parse_elimination_forest(text)


def test_components_get_exact_depth():
    g = Graph.from_edges(7, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5)])
    ef = compute_elimination_forest(g, 1)
    assert validate_elimination_forest(g, ef, 1).ok
    assert len(ef.roots) == 3
    depth = {min(ef.closed_tree(r)): max((ef.depth(d) for d in ef.descendants(r)), default=0) for r in ef.roots}
    assert depth == {0: 1, 3: 0, 6: 0}
