import random
from itertools import combinations

import pytest

from fvskernel.graph import Graph
from fvskernel.elim import elimination_distance_to_forest


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph.from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p])


def random_tree(rng: random.Random, n: int) -> Graph:
    return Graph.from_edges(n, [(v, rng.randrange(v)) for v in range(1, n)])


def all_graphs(n: int):
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph.from_edges(n, [e for i, e in enumerate(pairs) if mask >> i & 1])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def random_modulated(rng: random.Random, n: int, eta: int, p: float = 0.35) -> tuple[Graph, frozenset[int]]:
    """Random graph plus a modulator X with ed(G - X) <= eta, grown greedily."""
    g = random_graph(rng, n, p)
    order = list(range(n))
    rng.shuffle(order)
    x: set[int] = set()
    for v in order:
        if elimination_distance_to_forest(g.remove(x), eta) is not None:
            break
        x.add(v)
    return g, frozenset(x)


@pytest.fixture
def rng():
    return random.Random(20240611)


def bad_label_instances(rng: random.Random, count: int, eta: int, max_n: int = 10):
    """Graphs of elimination distance exactly ``eta`` with labels no minimum FVS can satisfy."""
    from fvskernel.elim import compute_elimination_forest
    from fvskernel.solver import FvsConstraint, brute_exists_min_fvs_with

    out = []
    while len(out) < count:
        n = rng.randint(3, max_n)
        g = random_graph(rng, n, rng.uniform(0.15, 0.45))
        if elimination_distance_to_forest(g, eta) != eta:
            continue
        vs = sorted(g.vertices)
        s = frozenset(rng.sample(vs, rng.randint(0, min(3, n))))
        t = frozenset(rng.sample(vs, rng.randint(0, n)))
        if brute_exists_min_fvs_with(g, FvsConstraint(s, t)):
            continue
        out.append((g, compute_elimination_forest(g, eta), s, t))
    return out


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)


def planted_modulated(rng: random.Random, n: int, eta: int = 1) -> tuple[Graph, frozenset[int]]:
    """Modulator of 1-4 vertices over several small components of elimination distance <= eta."""
    k = rng.randint(1, min(4, n - 1)) if n > 1 else 0
    x = list(range(k))
    edges = [(a, b) for a, b in combinations(x, 2) if rng.random() < 0.3]
    v = k
    while v < n:
        size = rng.randint(1, min(5, n - v))
        while True:
            part = random_graph(rng, size, rng.uniform(0.3, 0.8))
            if elimination_distance_to_forest(part, eta) is not None:
                break
        edges += [(a + v, b + v) for a, b in part.edges()]
        for u in range(v, v + size):
            edges += [(u, a) for a in x if rng.random() < 0.35]
        v += size
    return Graph.from_edges(n, edges), frozenset(x)
