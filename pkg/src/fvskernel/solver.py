"""Exact feedback vertex set by dynamic programming over a tree decomposition.

The constrained variant answers whether some minimum feedback vertex set
contains a required set and separates a terminal set.  Also here: vertex
multiway cut on trees and the matching packing of disjoint terminal paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .elim import TreeDecomposition, tree_decomposition_for, validate_tree_decomposition
from .errors import InputError
from .graph import (
    Graph,
    check_subset,
    connected_components,
    enumerate_minimum_fvs,
    is_forest,
    separates,
)


@dataclass(frozen=True)
class FvsConstraint:
    """``require`` must lie in the solution; ``separate`` must end up pairwise disconnected.

    The two sets may overlap: a deleted terminal counts as separated.
    """

    require: frozenset[int] = frozenset()
    separate: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "require", frozenset(self.require))
        object.__setattr__(self, "separate", frozenset(self.separate))


# -- nice decompositions --------------------------------------------------------

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: frozenset[int]
    children: tuple[int, ...] = ()
    vertex: int | None = None


def nice_decomposition(td: TreeDecomposition) -> list[NiceNode]:
    """Leaf/introduce/forget/join form with an empty root bag.

    Nodes are listed children-first; the last node is the root.
    """
    nodes: list[NiceNode] = []

    def add(node: NiceNode) -> int:
        nodes.append(node)
        return len(nodes) - 1

    def morph(idx: int, target: frozenset[int]) -> int:
        bag = nodes[idx].bag
        for v in sorted(bag - target):
            bag = bag - {v}
            idx = add(NiceNode(FORGET, bag, (idx,), v))
        for v in sorted(target - bag):
            bag = bag | {v}
            idx = add(NiceNode(INTRODUCE, bag, (idx,), v))
        return idx

    ch = td.children()
    order: list[int] = []
    stack = [td.root]
    while stack:
        u = stack.pop()
        order.append(u)
        stack.extend(ch[u])
    built: dict[int, int] = {}
    for u in reversed(order):
        bag = td.bags[u]
        subs = [morph(built[c], bag) for c in ch[u]]
        if not subs:
            subs = [morph(add(NiceNode(LEAF, frozenset())), bag)]
        cur = subs[0]
        for other in subs[1:]:
            cur = add(NiceNode(JOIN, bag, (cur, other)))
        built[u] = cur
    morph(built[td.root], frozenset())
    return nodes


# -- the dynamic program -----------------------------------------------------------
#
# A state is (deleted, parts): ``deleted`` is the solution restricted to the bag,
# ``parts`` is a frozenset of (class, flag) pairs partitioning the kept bag
# vertices by connectivity in the processed subgraph.  ``flag`` records that the
# component already holds a terminal among forgotten vertices.  Edges are
# processed when their first endpoint is forgotten, so each edge is seen once;
# deleted vertices are counted when forgotten, so each is counted once.

State = tuple[frozenset[int], frozenset[tuple[frozenset[int], bool]]]


def _relax(table: dict, key, cost: int) -> None:
    old = table.get(key)
    if old is None or cost < old:
        table[key] = cost


class _UnionFind:
    def __init__(self, items):
        self.p = {i: i for i in items}

    def find(self, a):
        while self.p[a] != a:
            self.p[a] = self.p[self.p[a]]
            a = self.p[a]
        return a

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.p[ra] = rb
        return True


def _run_dp(g: Graph, nice: list[NiceNode], require: frozenset[int], terminals: frozenset[int]) -> int:
    tables: list[dict[State, int] | None] = [None] * len(nice)
    for i, node in enumerate(nice):
        if node.kind == LEAF:
            tables[i] = {(frozenset(), frozenset()): 0}
        elif node.kind == INTRODUCE:
            tables[i] = _introduce(tables[node.children[0]], node.vertex, require)
        elif node.kind == FORGET:
            tables[i] = _forget(g, tables[node.children[0]], node.vertex, terminals)
        else:
            tables[i] = _join(tables[node.children[0]], tables[node.children[1]], terminals)
        for c in node.children:
            tables[c] = None
    final = tables[-1]
    return min(final.values())


def _introduce(table, v, require):
    out: dict[State, int] = {}
    for (deleted, parts), cost in table.items():
        _relax(out, (deleted | {v}, parts), cost)
        if v not in require:
            _relax(out, (deleted, parts | {(frozenset({v}), False)}), cost)
    return out


def _forget(g, table, v, terminals):
    out: dict[State, int] = {}
    for (deleted, parts), cost in table.items():
        if v in deleted:
            _relax(out, (deleted - {v}, parts), cost + 1)
            continue
        plist = list(parts)
        where = {u: i for i, (cls, _) in enumerate(plist) for u in cls}
        uf = _UnionFind(range(len(plist)))
        ok = True
        for u in g.neighbors(v):
            if u in where and u != v and not uf.union(where[v], where[u]):
                ok = False  # v already reaches u: the edge closes a cycle
                break
        if not ok:
            continue
        merged: dict[int, tuple[set[int], int]] = {}
        for i, (cls, flag) in enumerate(plist):
            r = uf.find(i)
            vs, cnt = merged.setdefault(r, (set(), 0))
            vs |= cls
            merged[r] = (vs, cnt + flag)
        new_parts = []
        for r, (vs, cnt) in merged.items():
            if cnt + len(vs & terminals) > 1:
                ok = False
                break
            if v in vs:
                vs = vs - {v}
                cnt += v in terminals
                if not vs:
                    continue  # component finished
            new_parts.append((frozenset(vs), cnt > 0))
        if ok:
            _relax(out, (deleted, frozenset(new_parts)), cost)
    return out


def _join(left, right, terminals):
    out: dict[State, int] = {}
    by_deleted: dict[frozenset[int], list] = {}
    for (deleted, parts), cost in right.items():
        by_deleted.setdefault(deleted, []).append((parts, cost))
    for (deleted, lparts), lcost in left.items():
        for rparts, rcost in by_deleted.get(deleted, ()):
            merged = _merge_parts(lparts, rparts, terminals)
            if merged is not None:
                _relax(out, (deleted, merged), lcost + rcost)
    return out


def _merge_parts(lparts, rparts, terminals):
    lp, rp = list(lparts), list(rparts)
    keys = [("l", i) for i in range(len(lp))] + [("r", j) for j in range(len(rp))]
    uf = _UnionFind(keys)
    lwhere = {u: i for i, (cls, _) in enumerate(lp) for u in cls}
    for j, (cls, _) in enumerate(rp):
        for u in cls:
            # the two children's edge sets are disjoint: a second link between
            # already joined classes is a cycle
            if not uf.union(("l", lwhere[u]), ("r", j)):
                return None
    groups: dict = {}
    for side, lst in (("l", lp), ("r", rp)):
        for i, (cls, flag) in enumerate(lst):
            r = uf.find((side, i))
            vs, cnt = groups.setdefault(r, (set(), 0))
            vs |= cls
            groups[r] = (vs, cnt + flag)
    out = []
    for vs, cnt in groups.values():
        if cnt + len(vs & terminals) > 1:
            return None
        out.append((frozenset(vs), cnt > 0))
    return frozenset(out)


def _checked_td(g: Graph, td: TreeDecomposition | None) -> TreeDecomposition:
    if td is None:
        return tree_decomposition_for(g)
    rep = validate_tree_decomposition(g, td)
    if not rep:
        raise InputError(f"invalid tree decomposition: {rep.violations[0][1]}")
    return td


def fvs_size(g: Graph, td: TreeDecomposition | None = None) -> int:
    """fvs(G) by dynamic programming over ``td`` (derived from ``g`` if omitted)."""
    td = _checked_td(g, td)
    return _run_dp(g, nice_decomposition(td), frozenset(), frozenset())


def constrained_fvs_size(g: Graph, td: TreeDecomposition | None, c: FvsConstraint) -> int:
    """Minimum size of a feedback vertex set containing ``c.require`` and separating ``c.separate``."""
    td = _checked_td(g, td)
    check_subset(g, c.require, "required set")
    check_subset(g, c.separate, "terminal set")
    return _run_dp(g, nice_decomposition(td), c.require, c.separate)


def exists_min_fvs_with(g: Graph, td: TreeDecomposition | None, c: FvsConstraint) -> bool:
    td = _checked_td(g, td)
    nice = nice_decomposition(td)
    check_subset(g, c.require, "required set")
    check_subset(g, c.separate, "terminal set")
    base = _run_dp(g, nice, frozenset(), frozenset())
    if not c.require and len(c.separate) < 2:
        return True
    return _run_dp(g, nice, c.require, c.separate) == base


def brute_exists_min_fvs_with(g: Graph, c: FvsConstraint, cap: int | None = None) -> bool:
    """Oracle twin of :func:`exists_min_fvs_with` via full enumeration."""
    check_subset(g, c.require, "required set")
    check_subset(g, c.separate, "terminal set")
    return any(
        c.require <= x and separates(g, x, c.separate) for x in enumerate_minimum_fvs(g, cap)
    )


# -- multiway cut and terminal paths on trees -----------------------------------------


@dataclass(frozen=True)
class TPath:
    vertices: tuple[int, ...]

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.vertices[0], self.vertices[-1]

    @property
    def internal(self) -> tuple[int, ...]:
        return self.vertices[1:-1]


def _check_tree(t: Graph) -> None:
    if t.n and (len(connected_components(t)) != 1 or not is_forest(t)):
        raise InputError("expected a tree (connected and acyclic)")


def _rooted(t: Graph, root: int) -> tuple[dict[int, int | None], list[int]]:
    parent: dict[int, int | None] = {root: None}
    order = [root]
    for u in order:
        for w in sorted(t.neighbors(u)):
            if w not in parent:
                parent[w] = u
                order.append(w)
    return parent, order


def _subtree(parent: dict[int, int | None], order: list[int], u: int) -> frozenset[int]:
    inside = {u}
    for w in order:
        if parent[w] in inside:
            inside.add(w)
    return frozenset(inside)


def normalize_cut(t: Graph, terminals: Iterable[int], cut: Iterable[int], root: int | None = None) -> frozenset[int]:
    """Move cut vertices to their parents while the cut still separates."""
    _check_tree(t)
    terminals = check_subset(t, terminals, "terminal set")
    cut = set(check_subset(t, cut, "cut"))
    if not t.n:
        return frozenset(cut)
    root = min(t.vertices) if root is None else root
    parent, _ = _rooted(t, root)
    changed = True
    while changed:
        changed = False
        for u in sorted(cut):
            w = parent[u]
            if w is None or w in cut:
                continue
            trial = (cut - {u}) | {w}
            if separates(t, trial, terminals):
                cut = trial
                changed = True
                break
    return frozenset(cut)


def min_multiway_cut_on_tree(t: Graph, terminals: Iterable[int], root: int | None = None) -> frozenset[int]:
    """Minimum vertex multiway cut of ``terminals`` in the tree ``t``.

    Leaf-up greedy: a vertex is cut when it is a terminal reached by an
    unseparated terminal below, or when two unseparated branches meet there.
    """
    _check_tree(t)
    terminals = check_subset(t, terminals, "terminal set")
    if not t.n:
        return frozenset()
    root = min(t.vertices) if root is None else root
    parent, order = _rooted(t, root)
    active: dict[int, bool] = {}
    cut: set[int] = set()
    live_below: dict[int, int] = {v: 0 for v in order}
    for v in reversed(order):
        k = live_below[v]
        if (v in terminals and k >= 1) or k >= 2:
            cut.add(v)
            active[v] = False
        else:
            active[v] = v in terminals or k == 1
        if active[v] and parent[v] is not None:
            live_below[parent[v]] += 1
    return normalize_cut(t, terminals, cut, root)


def _tree_path(parent: dict[int, int | None], a: int, b: int) -> tuple[int, ...]:
    up_a = [a]
    while parent[up_a[-1]] is not None:
        up_a.append(parent[up_a[-1]])
    pos = {v: i for i, v in enumerate(up_a)}
    up_b = [b]
    while up_b[-1] not in pos:
        up_b.append(parent[up_b[-1]])
    meet = up_b[-1]
    return tuple(up_a[: pos[meet] + 1] + list(reversed(up_b[:-1])))


def pack_t_paths(t: Graph, terminals: Iterable[int], k: int) -> list[TPath]:
    """``k`` vertex-disjoint terminal paths, ``k`` being the minimum cut size.

    Repeatedly takes the lowest-id cut vertex with no other cut vertex below
    it, joins two terminals of its subtree, and discards that subtree.
    """
    _check_tree(t)
    terminals = check_subset(t, terminals, "terminal set")
    paths: list[TPath] = []
    cur = t.vertices
    root = min(cur) if cur else None
    while cur:
        sub = t.induced(cur)
        live = terminals & cur
        cut = min_multiway_cut_on_tree(sub, live, root)
        if not cut:
            break
        parent, order = _rooted(sub, root)
        subtrees = {u: _subtree(parent, order, u) for u in cut}
        u = min(v for v in cut if subtrees[v] & cut == {v})
        below = sorted(live & subtrees[u])
        if len(below) < 2:
            raise AssertionError("normalized cut vertex without two terminals below")
        paths.append(TPath(_tree_path(parent, below[0], below[1])))
        cur = cur - subtrees[u]
    if len(paths) != k:
        raise InputError(f"k={k} differs from the minimum multiway cut size {len(paths)}")
    return paths
