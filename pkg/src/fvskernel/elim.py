"""Elimination forests to a forest and the tree decompositions they induce."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import InputError, ParseError
from .graph import Graph, connected_components, is_forest


@dataclass
class ValidationReport:
    """Outcome of a structural check; ``violations`` holds ``(rule, detail)`` pairs."""

    violations: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def add(self, rule: str, detail: str) -> None:
        self.violations.append((rule, detail))


@dataclass(frozen=True)
class EliminationForest:
    """Rooted forest over decomposition nodes with a bag per node.

    ``parent`` maps each node to its parent (``None`` for roots).
    """

    parent: dict[int, int | None]
    bags: dict[int, frozenset[int]]

    @property
    def nodes(self) -> list[int]:
        return sorted(self.parent)

    def children(self, node: int) -> list[int]:
        return self._children().get(node, [])

    def _children(self) -> dict[int, list[int]]:
        ch: dict[int, list[int]] = {}
        for v, p in sorted(self.parent.items()):
            if p is not None:
                ch.setdefault(p, []).append(v)
        return ch

    @property
    def roots(self) -> list[int]:
        return [v for v in self.nodes if self.parent[v] is None]

    def is_leaf(self, node: int) -> bool:
        return not self.children(node)

    @property
    def leaves(self) -> list[int]:
        ch = self._children()
        return [v for v in self.nodes if v not in ch]

    def ancestors(self, node: int) -> list[int]:
        """Proper ancestors, nearest first."""
        out = []
        p = self.parent[node]
        while p is not None:
            out.append(p)
            p = self.parent[p]
        return out

    def depth(self, node: int) -> int:
        return len(self.ancestors(node))

    @property
    def height(self) -> int:
        return max((self.depth(v) for v in self.leaves), default=0)

    def tail(self, node: int) -> frozenset[int]:
        """Union of the bags of all proper ancestors."""
        out: set[int] = set()
        for a in self.ancestors(node):
            out |= self.bags[a]
        return frozenset(out)

    def closed_tail(self, node: int) -> frozenset[int]:
        return self.tail(node) | self.bags[node]

    def descendants(self, node: int) -> list[int]:
        ch = self._children()
        out, stack = [], list(ch.get(node, []))
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(ch.get(u, []))
        return sorted(out)

    def tree(self, node: int) -> frozenset[int]:
        """Union of the bags of all proper descendants."""
        out: set[int] = set()
        for d in self.descendants(node):
            out |= self.bags[d]
        return frozenset(out)

    def closed_tree(self, node: int) -> frozenset[int]:
        return self.tree(node) | self.bags[node]

    def extended(self, node: int) -> frozenset[int]:
        """Vertex set of G_v^+: closed tree plus closed tail."""
        return self.closed_tree(node) | self.tail(node)

    def node_of(self) -> dict[int, int]:
        return {v: u for u, bag in self.bags.items() for v in bag}


def _is_rooted_forest(parent: dict[int, int | None]) -> str | None:
    for v, p in parent.items():
        if p is not None and p not in parent:
            return f"node {v} has unknown parent {p}"
    for v in parent:
        seen = {v}
        p = parent[v]
        while p is not None:
            if p in seen:
                return f"parent pointers of node {v} loop"
            seen.add(p)
            p = parent[p]
    return None


def validate_elimination_forest(g: Graph, ef: EliminationForest, eta: int) -> ValidationReport:
    """Check the four elimination-forest conditions and ``height <= eta``."""
    rep = ValidationReport()
    if set(ef.parent) != set(ef.bags):
        rep.add("forest", "parent map and bag map cover different nodes")
        return rep
    bad = _is_rooted_forest(ef.parent)
    if bad:
        rep.add("forest", bad)
        return rep

    owner: dict[int, int] = {}
    for u in ef.nodes:
        for v in ef.bags[u]:
            if v not in g:
                rep.add("partition", f"bag of node {u} holds {v}, not a vertex of the graph")
            elif v in owner:
                rep.add("partition", f"vertex {v} in bags of nodes {owner[v]} and {u}")
            else:
                owner[v] = u
    missing = sorted(g.vertices - set(owner))
    if missing:
        rep.add("partition", f"vertices {missing} are in no bag")

    leaves = set(ef.leaves)
    for u in ef.nodes:
        bag = ef.bags[u]
        if u not in leaves:
            if len(bag) != 1:
                rep.add("singleton", f"non-leaf node {u} has bag of size {len(bag)}")
            continue
        sub = g.induced(bag & g.vertices)
        if not bag or len(connected_components(sub)) != 1:
            rep.add("leaf", f"leaf node {u} does not induce a connected subgraph")
        elif not is_forest(sub):
            rep.add("leaf", f"leaf node {u} induces a graph with a cycle")

    for a, b in g.edges():
        if a not in owner or b not in owner:
            continue
        s, t = owner[a], owner[b]
        if s == t:
            continue
        if s not in ef.ancestors(t) and t not in ef.ancestors(s):
            rep.add("ancestry", f"edge {a}-{b} joins nodes {s} and {t} that are not ancestor-related")

    if ef.height > eta:
        rep.add("height", f"height {ef.height} exceeds {eta}")
    return rep


class _EdSearch:
    """Exact elimination distance to a forest, memoised on connected vertex sets."""

    def __init__(self, g: Graph):
        self.g = g
        self.at_most: dict[tuple[frozenset[int], int], bool] = {}
        self.exact: dict[frozenset[int], int] = {}

    def components(self, vs: frozenset[int]) -> list[frozenset[int]]:
        return connected_components(self.g.induced(vs))

    def le(self, comp: frozenset[int], k: int) -> bool:
        """ed(G[comp]) <= k for a connected vertex set."""
        if comp in self.exact:
            return self.exact[comp] <= k
        key = (comp, k)
        if key in self.at_most:
            return self.at_most[key]
        if is_forest(self.g.induced(comp)):
            self.exact[comp] = 0
            return True
        res = k > 0 and self.deletion_vertex(comp, k) is not None
        self.at_most[key] = res
        return res

    def deletion_vertex(self, comp: frozenset[int], k: int) -> int | None:
        """Lowest-id v with every component of comp - v at distance <= k - 1."""
        for v in sorted(comp):
            if all(self.le(c, k - 1) for c in self.components(comp - {v})):
                return v
        return None

    def value(self, comp: frozenset[int], cap: int) -> int | None:
        for k in range(cap + 1):
            if self.le(comp, k):
                self.exact[comp] = k
                return k
        return None

    def graph_value(self, vs: frozenset[int], cap: int) -> int | None:
        best = 0
        for c in self.components(vs):
            d = self.value(c, cap)
            if d is None:
                return None
            best = max(best, d)
        return best


def elimination_distance_to_forest(g: Graph, cap: int = 8) -> int | None:
    """Exact elimination distance to a forest, or None if it exceeds ``cap``."""
    return _EdSearch(g).graph_value(g.vertices, cap)


def compute_elimination_forest(g: Graph, eta: int) -> EliminationForest | None:
    """An elimination forest of height at most ``eta``, or None if none exists.

    Each component gets its exact elimination distance as depth; the deleted
    vertex is the lowest id achieving it.
    """
    search = _EdSearch(g)
    if search.graph_value(g.vertices, eta) is None:
        return None
    parent: dict[int, int | None] = {}
    bags: dict[int, frozenset[int]] = {}

    def build(comp: frozenset[int], par: int | None) -> None:
        node = len(parent)
        parent[node] = par
        k = search.value(comp, eta)
        if k == 0:
            bags[node] = comp
            return
        v = search.deletion_vertex(comp, k)
        bags[node] = frozenset({v})
        for c in search.components(comp - {v}):
            build(c, node)

    for comp in search.components(g.vertices):
        build(comp, None)
    return EliminationForest(parent, bags)


def format_elimination_forest(ef: EliminationForest) -> str:
    lines = []
    for u in ef.nodes:
        p = ef.parent[u]
        bag = ",".join(str(v) for v in sorted(ef.bags[u]))
        lines.append(f"node {u} parent {'-' if p is None else p} bag {bag}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_elimination_forest(text: str) -> EliminationForest:
    parent: dict[int, int | None] = {}
    bags: dict[int, frozenset[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (5, 6) or parts[0] != "node" or parts[2] != "parent" or parts[4] != "bag":
            raise ParseError(f"expected 'node <id> parent <id|-> bag v1,v2,...', got {line!r}", lineno)
        try:
            node = int(parts[1])
            par = None if parts[3] == "-" else int(parts[3])
            bag = frozenset(int(v) for v in parts[5].split(",")) if len(parts) == 6 else frozenset()
        except ValueError:
            raise ParseError(f"non-integer id in {line!r}", lineno) from None
        if node in parent:
            raise ParseError(f"duplicate node {node}", lineno)
        parent[node] = par
        bags[node] = bag
    return EliminationForest(parent, bags)


# -- tree decompositions ------------------------------------------------------


@dataclass(frozen=True)
class TreeDecomposition:
    parent: dict[int, int | None]
    bags: dict[int, frozenset[int]]

    @property
    def nodes(self) -> list[int]:
        return sorted(self.parent)

    @property
    def root(self) -> int:
        roots = [v for v, p in self.parent.items() if p is None]
        if len(roots) != 1:
            raise InputError(f"tree decomposition has {len(roots)} roots")
        return roots[0]

    def children(self) -> dict[int, list[int]]:
        ch: dict[int, list[int]] = {v: [] for v in self.parent}
        for v, p in sorted(self.parent.items()):
            if p is not None:
                ch[p].append(v)
        return ch

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1


def validate_tree_decomposition(g: Graph, td: TreeDecomposition) -> ValidationReport:
    rep = ValidationReport()
    if set(td.parent) != set(td.bags):
        rep.add("tree", "parent map and bag map cover different nodes")
        return rep
    bad = _is_rooted_forest(td.parent)
    if bad:
        rep.add("tree", bad)
        return rep
    roots = [v for v, p in td.parent.items() if p is None]
    if len(roots) != 1:
        rep.add("tree", f"expected one root, found {len(roots)}")
        return rep
    where: dict[int, list[int]] = {}
    for u, bag in td.bags.items():
        for v in bag:
            if v not in g:
                rep.add("vertex", f"bag {u} holds unknown vertex {v}")
            where.setdefault(v, []).append(u)
    for v in sorted(g.vertices):
        if v not in where:
            rep.add("vertex", f"vertex {v} is in no bag")
    for a, b in g.edges():
        if not any(a in bag and b in bag for bag in td.bags.values()):
            rep.add("edge", f"edge {a}-{b} is in no bag")
    for v, nodes in sorted(where.items()):
        # nodes holding v form a subtree iff exactly one of them has its parent outside
        ns = set(nodes)
        tops = [u for u in ns if td.parent[u] not in ns]
        if len(tops) != 1:
            rep.add("subtree", f"bags holding {v} are not connected in the tree")
    return rep


def tree_decomposition_from_elimination_forest(g: Graph, ef: EliminationForest) -> TreeDecomposition:
    """Width <= height(ef) + 1.

    Each leaf's tree gets its width-1 decomposition with the leaf's tail added
    to every bag; internal nodes become bags holding their closed tail.
    """
    if not validate_elimination_forest(g, ef, ef.height):
        raise InputError("elimination forest does not validate against the graph")
    parent: dict[int, int | None] = {0: None}
    bags: dict[int, frozenset[int]] = {0: frozenset()}
    td_of: dict[int, int] = {}

    def new(bag: Iterable[int], par: int) -> int:
        node = len(parent)
        parent[node] = par
        bags[node] = frozenset(bag)
        return node

    leaves = set(ef.leaves)
    # ef nodes in order of increasing depth so parents exist first
    for u in sorted(ef.nodes, key=lambda w: (ef.depth(w), w)):
        p = ef.parent[u]
        attach = 0 if p is None else td_of[p]
        if u not in leaves:
            td_of[u] = new(ef.closed_tail(u), attach)
            continue
        tail = ef.tail(u)
        bag = ef.bags[u]
        sub = g.induced(bag)
        root = min(bag)
        seen = {root: new({root} | tail, attach)}
        stack = [root]
        while stack:
            a = stack.pop()
            for b in sorted(sub.neighbors(a)):
                if b not in seen:
                    seen[b] = new({a, b} | tail, seen[a])
                    stack.append(b)
        td_of[u] = seen[root]
    return TreeDecomposition(parent, bags)


def tree_decomposition_for(g: Graph, cap: int = 8) -> TreeDecomposition:
    """Decomposition derived from an optimal-height elimination forest."""
    eta = elimination_distance_to_forest(g, cap)
    if eta is None:
        raise InputError(f"elimination distance exceeds cap {cap}")
    return tree_decomposition_from_elimination_forest(g, compute_elimination_forest(g, eta))
