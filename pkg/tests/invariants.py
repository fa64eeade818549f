"""Structural invariants checked on generated instances.

Each check raises AssertionError on a counterexample and returns True when
the instance was non-trivial enough to count.
"""

import random
from itertools import combinations

from fvskernel.elim import compute_elimination_forest, elimination_distance_to_forest
from fvskernel.graph import (
    Graph,
    biconnected_components,
    brute_force_fvs,
    connected_components,
    enumerate_minimum_fvs,
    is_feedback_vertex_set,
    separates,
)
from fvskernel.reduction import NecklaceStructure, build_uniform_necklace, cycle_graph

from conftest import random_graph, random_tree


def boundary(g: Graph, x0: frozenset[int], comp: frozenset[int]) -> tuple[frozenset[int], frozenset[int]]:
    s = frozenset(v for v in comp if len(g.neighbors(v) & x0) >= 2)
    t = frozenset(v for v in comp if len(g.neighbors(v) & x0) == 1)
    return s, t


def composed_solution(seed: int) -> bool:
    """A component solution that takes S and separates T combines with any outside FVS."""
    rng = random.Random(seed)
    n = rng.randint(2, 9)
    g = random_graph(rng, n, rng.uniform(0.2, 0.6))
    x = frozenset(rng.sample(range(n), rng.randint(1, n - 1)))
    cstar = rng.choice(connected_components(g.remove(x)))
    rest = g.remove(cstar)
    _, base = brute_force_fvs(rest)
    spare = sorted(rest.vertices - base)
    y_hat = base | frozenset(rng.sample(spare, rng.randint(0, len(spare))))
    s, t = boundary(g, x - y_hat, cstar)
    inner = g.induced(cstar)
    for k in range(len(cstar) + 1):
        for ys in combinations(sorted(cstar), k):
            ys = frozenset(ys)
            if is_feedback_vertex_set(inner, ys) and s <= ys and separates(inner, ys, t):
                assert is_feedback_vertex_set(g, y_hat | ys), (g.edges(), x, y_hat, ys)
    return bool(s or len(t) >= 2)


def touched_components(seed: int) -> bool:
    """In an acyclic graph few components of G - X lie between two vertices of X*."""
    rng = random.Random(seed)
    n = rng.randint(1, 14)
    forest = random_tree(rng, n).remove(rng.sample(range(n), rng.randint(0, n // 3)))
    vs = sorted(forest.vertices)
    if not vs:
        return False
    x = frozenset(rng.sample(vs, rng.randint(1, len(vs))))
    xstar = frozenset(rng.sample(sorted(x), rng.randint(1, len(x))))
    # a path between two X* vertices with interior in C exists iff C sees two of them
    touched = sum(1 for c in connected_components(forest.remove(x)) if len(forest.neighborhood(c) & xstar) >= 2)
    assert touched <= len(xstar) - 1, (forest.edges(), x, xstar)
    return touched > 0


def conflicting_components(seed: int) -> bool:
    """Given an FVS Y, few components clash with Y over their S and T sets."""
    rng = random.Random(seed)
    n = rng.randint(2, 9)
    g = random_graph(rng, n, rng.uniform(0.2, 0.6))
    x = frozenset(rng.sample(range(n), rng.randint(1, n - 1)))
    _, base = brute_force_fvs(g)
    y = base | frozenset(rng.sample(range(n), rng.randint(0, 2)))
    free = sorted(x - y)
    if not free:
        return False
    xstar = frozenset(rng.sample(free, rng.randint(1, len(free))))
    conflicts = 0
    for comp in connected_components(g.remove(x)):
        s, t = boundary(g, xstar, comp)
        if not s <= y or not separates(g.induced(comp), y & comp, t):
            conflicts += 1
    assert conflicts <= len(xstar) - 1, (g.edges(), x, y, xstar)
    return conflicts > 0


def _forest_of(g: Graph):
    eta = elimination_distance_to_forest(g)
    return eta, compute_elimination_forest(g, eta)


def leaf_bag_cap(g: Graph) -> bool:
    """A minimum FVS takes at most eta vertices from any leaf bag."""
    eta, ef = _forest_of(g)
    for x in enumerate_minimum_fvs(g):
        for leaf in ef.leaves:
            assert len(x & ef.bags[leaf]) <= eta, (g.edges(), x, leaf)
    return eta > 0


def tail_separates_leaf(g: Graph) -> bool:
    """Every path out of a leaf bag passes through the leaf's tail."""
    _, ef = _forest_of(g)
    for leaf in ef.leaves:
        bag = ef.bags[leaf]
        for comp in connected_components(g.remove(ef.tail(leaf))):
            if comp & bag:
                assert comp <= bag, (g.edges(), leaf)
    return len(ef.nodes) > 1


def few_suboptimal_children(g: Graph) -> bool:
    """At most eta children of a node see a non-optimal restriction of a minimum FVS."""
    eta, ef = _forest_of(g)
    subs = {c: g.induced(ef.closed_tree(c)) for c in ef.nodes}
    opt = {c: brute_force_fvs(sub)[0] for c, sub in subs.items()}
    for x in enumerate_minimum_fvs(g):
        for u in ef.nodes:
            off = 0
            for c in ef.children(u):
                part = x & subs[c].vertices
                if len(part) != opt[c] or not is_feedback_vertex_set(subs[c], part):
                    off += 1
            assert off <= eta, (g.edges(), x, u)
    return any(ef.children(u) for u in ef.nodes)


def necklace_blocks(seed: int) -> bool:
    """Blocks with three or more vertices sit inside one bead."""
    rng = random.Random(seed)
    k = rng.randint(3, 6)
    x, y = rng.sample(range(k), 2)
    neck = build_uniform_necklace(NecklaceStructure(cycle_graph(k), x, y), rng.randint(1, 6))
    for b in biconnected_components(neck.graph):
        if len(b) >= 3:
            assert sum(1 for bead in neck.bead_sets if b <= bead) == 1
    return True
