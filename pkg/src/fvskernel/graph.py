"""Simple undirected graphs, connectivity and cycle primitives, brute-force oracles.

Vertex ids are plain integers.  Induced subgraphs keep the ids of the parent
graph, so vertex sets computed on one graph stay meaningful on its subgraphs.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator

from .config import default_caps
from .errors import InputError, OracleLimitError, ParseError

Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple undirected graph."""

    __slots__ = ("_adj", "_vertices")

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[tuple[int, int]] = ()):
        adj: dict[int, set[int]] = {int(v): set() for v in vertices}
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if u not in adj or v not in adj:
                raise InputError(f"edge ({u}, {v}) has an endpoint outside the vertex set")
            adj[u].add(v)
            adj[v].add(u)
        self._adj = {v: frozenset(ns) for v, ns in adj.items()}
        self._vertices = frozenset(adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]] = ()) -> "Graph":
        """Graph on vertices ``0..n-1``."""
        return cls(range(n), edges)

    @property
    def vertices(self) -> frozenset[int]:
        return self._vertices

    def edges(self) -> list[Edge]:
        """Sorted list of edges as ``(u, v)`` with ``u < v``."""
        return sorted(_norm(u, v) for u in self._adj for v in self._adj[u] if u < v)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._adj and v in self._adj[u]

    def __len__(self) -> int:
        return len(self._vertices)

    def __contains__(self, v: object) -> bool:
        return v in self._vertices

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._vertices))

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return sum(len(ns) for ns in self._adj.values()) // 2

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self._vertices, tuple(self.edges())))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def induced(self, keep: Iterable[int]) -> "Graph":
        keep = frozenset(keep)
        missing = keep - self._vertices
        if missing:
            raise InputError(f"vertices {sorted(missing)} not in graph")
        g = Graph.__new__(Graph)
        g._adj = {v: self._adj[v] & keep for v in keep}
        g._vertices = keep
        return g

    def remove(self, drop: Iterable[int]) -> "Graph":
        """The graph ``G - drop``; ids absent from the graph are ignored."""
        return self.induced(self._vertices - frozenset(drop))

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self._vertices, list(self.edges()) + list(extra))

    def neighborhood(self, s: Iterable[int]) -> frozenset[int]:
        """N(S): vertices outside S adjacent to some vertex of S."""
        s = frozenset(s)
        out: set[int] = set()
        for v in s:
            out |= self._adj[v]
        return frozenset(out - s)


def disjoint_union(*graphs: Graph) -> tuple[Graph, list[dict[int, int]]]:
    """Relabel and combine graphs; returns the union and one id map per input."""
    maps: list[dict[int, int]] = []
    edges: list[Edge] = []
    nxt = 0
    for g in graphs:
        mp = {v: nxt + i for i, v in enumerate(sorted(g.vertices))}
        nxt += len(mp)
        maps.append(mp)
        edges.extend((mp[u], mp[v]) for u, v in g.edges())
    return Graph.from_edges(nxt, edges), maps


def check_subset(g: Graph, s: Iterable[int], what: str = "vertex set") -> frozenset[int]:
    s = frozenset(s)
    bad = s - g.vertices
    if bad:
        raise InputError(f"{what} contains vertices {sorted(bad)} not in the graph")
    return s


# -- connectivity -----------------------------------------------------------


def connected_components(g: Graph) -> list[frozenset[int]]:
    """Components ordered by their smallest vertex id."""
    seen: set[int] = set()
    comps = []
    for s in sorted(g.vertices):
        if s in seen:
            continue
        seen.add(s)
        stack, comp = [s], [s]
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
                    comp.append(w)
        comps.append(frozenset(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) <= 1


def separates(g: Graph, cut: Iterable[int], terminals: Iterable[int]) -> bool:
    """True iff every component of ``g - cut`` holds at most one terminal.

    Terminals inside the cut count as separated.
    """
    cut = frozenset(cut)
    live = frozenset(terminals) - cut
    for comp in connected_components(g.remove(cut)):
        if len(comp & live) > 1:
            return False
    return True


def find_cycle(g: Graph) -> list[int] | None:
    """Some simple cycle as a vertex sequence (first vertex not repeated), or None."""
    parent: dict[int, int | None] = {}
    depth: dict[int, int] = {}
    for root in sorted(g.vertices):
        if root in parent:
            continue
        parent[root] = None
        depth[root] = 0
        stack = [(root, iter(sorted(g.neighbors(root))))]
        while stack:
            u, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent[u]:
                    continue
                if w in parent:
                    # back edge u-w closes a cycle along the tree path
                    if depth[w] > depth[u]:
                        continue
                    cyc = [u]
                    x = u
                    while x != w:
                        x = parent[x]
                        cyc.append(x)
                    return cyc
                parent[w] = u
                depth[w] = depth[u] + 1
                stack.append((w, iter(sorted(g.neighbors(w)))))
                advanced = True
                break
            if not advanced:
                stack.pop()
    return None


def is_forest(g: Graph) -> bool:
    # a graph is acyclic iff m = n - #components
    return g.m == g.n - len(connected_components(g))


def is_feedback_vertex_set(g: Graph, x: Iterable[int]) -> bool:
    x = check_subset(g, x, "feedback vertex set")
    return is_forest(g.remove(x))


class _Acyclicity:
    """Fast repeated 'is G - S acyclic' checks over a fixed graph."""

    def __init__(self, g: Graph):
        self.order = sorted(g.vertices)
        self.index = {v: i for i, v in enumerate(self.order)}
        self.edges = [(self.index[u], self.index[v]) for u, v in g.edges()]

    def acyclic_without(self, removed: frozenset[int] | set[int]) -> bool:
        parent = list(range(len(self.order)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a, b in self.edges:
            if a in removed or b in removed:
                continue
            ra, rb = find(a), find(b)
            if ra == rb:
                return False
            parent[ra] = rb
        return True


def brute_force_fvs(g: Graph, cap: int | None = None) -> tuple[int, frozenset[int]]:
    """Minimum feedback vertex set by subsets of increasing size.

    Returns ``(size, witness)``; the witness is the lexicographically first
    minimum solution.
    """
    cap = default_caps().brute_cap if cap is None else cap
    if g.n > cap:
        raise OracleLimitError(f"brute_force_fvs: {g.n} vertices exceeds cap {cap}")
    chk = _Acyclicity(g)
    idx = list(range(len(chk.order)))
    for k in range(g.n + 1):
        for combo in combinations(idx, k):
            if chk.acyclic_without(set(combo)):
                return k, frozenset(chk.order[i] for i in combo)
    raise AssertionError("unreachable: deleting every vertex leaves a forest")


def enumerate_minimum_fvs(g: Graph, cap: int | None = None) -> list[frozenset[int]]:
    """All minimum-cardinality feedback vertex sets, in lexicographic order."""
    cap = default_caps().enumerate_cap if cap is None else cap
    if g.n > cap:
        raise OracleLimitError(f"enumerate_minimum_fvs: {g.n} vertices exceeds cap {cap}")
    chk = _Acyclicity(g)
    idx = list(range(len(chk.order)))
    for k in range(g.n + 1):
        found = [
            frozenset(chk.order[i] for i in combo)
            for combo in combinations(idx, k)
            if chk.acyclic_without(set(combo))
        ]
        if found:
            return found
    raise AssertionError("unreachable")


def biconnected_components(g: Graph) -> list[frozenset[int]]:
    """Vertex sets of the maximal biconnected subgraphs.

    Bridges give 2-vertex components; isolated vertices give none.
    """
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    out: list[frozenset[int]] = []
    counter = 0
    for root in sorted(g.vertices):
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        edge_stack: list[Edge] = []
        stack = [(root, None, iter(sorted(g.neighbors(root))))]
        while stack:
            u, par, it = stack[-1]
            pushed = False
            for w in it:
                if w == par:
                    continue
                if w not in disc:
                    disc[w] = low[w] = counter
                    counter += 1
                    edge_stack.append((u, w))
                    stack.append((w, u, iter(sorted(g.neighbors(w)))))
                    pushed = True
                    break
                if disc[w] < disc[u]:
                    edge_stack.append((u, w))
                    low[u] = min(low[u], disc[w])
            if pushed:
                continue
            stack.pop()
            if par is None:
                continue
            low[par] = min(low[par], low[u])
            if low[u] >= disc[par]:
                comp: set[int] = set()
                while True:
                    a, b = edge_stack.pop()
                    comp.update((a, b))
                    if (a, b) == (par, u):
                        break
                out.append(frozenset(comp))
    out.sort(key=lambda c: (min(c), len(c)))
    return out


# -- edge-list I/O ------------------------------------------------------------


def parse_edge_list(text: str) -> Graph:
    """Parse ``p <n> <m>`` followed by ``m`` lines ``u v``.

    An optional ``v <id> <id> ...`` line gives an explicit vertex set, for
    graphs whose ids are not ``0..n-1`` (kernels keep original ids).
    """
    n = m = None
    explicit: list[int] | None = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError("duplicate header", lineno)
            try:
                n, m = int(parts[1]), int(parts[2])
            except (IndexError, ValueError):
                raise ParseError(f"malformed header {line!r}", lineno) from None
            if len(parts) != 3 or n < 0 or m < 0:
                raise ParseError(f"malformed header {line!r}", lineno)
            continue
        if n is None:
            raise ParseError("edge before 'p <n> <m>' header", lineno)
        if parts[0] == "v":
            try:
                explicit = [int(p) for p in parts[1:]]
            except ValueError:
                raise ParseError(f"malformed vertex line {line!r}", lineno) from None
            continue
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer vertex in {line!r}", lineno) from None
        verts = range(n) if explicit is None else explicit
        if u == v:
            raise ParseError(f"self-loop {u}", lineno)
        if u not in verts or v not in verts:
            raise ParseError(f"vertex out of range in {line!r}", lineno)
        edges.append((u, v))
    if n is None:
        raise ParseError("missing 'p <n> <m>' header")
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges, found {len(edges)}")
    if explicit is not None and len(explicit) != n:
        raise ParseError(f"header announces {n} vertices, vertex line lists {len(explicit)}")
    if len({_norm(u, v) for u, v in edges}) != len(edges):
        raise ParseError("parallel edges are not allowed")
    return Graph(range(n) if explicit is None else explicit, edges)


def format_edge_list(g: Graph) -> str:
    """Byte-stable edge-list text (sorted edges)."""
    lines = [f"p {g.n} {g.m}"]
    if g.vertices != frozenset(range(g.n)):
        lines.append("v " + " ".join(str(v) for v in sorted(g.vertices)))
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_edge_list(path) -> Graph:
    with open(path) as fh:
        return parse_edge_list(fh.read())


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_edge_list(g))
