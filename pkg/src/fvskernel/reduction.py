"""CNF to minor-free-deletion reduction built from uniform necklaces and variable gadgets.

With the pattern ``K3`` the deletion problem is feedback vertex set, which is
the case the verification helpers here decide exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Sequence

from .errors import ConstructionError, InputError, ParseError, UnsupportedPatternError
from .graph import Graph, connected_components, is_connected, is_forest

PATTERN_CAP = 6


def k3() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def cycle_graph(k: int) -> Graph:
    return Graph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])


def is_biconnected(h: Graph) -> bool:
    if h.n < 3 or not is_connected(h):
        return False
    return all(is_connected(h.remove({v})) for v in h.vertices)


@dataclass(frozen=True)
class NecklaceStructure:
    pattern: Graph
    x_anchor: int
    y_anchor: int

    def __post_init__(self):
        if self.x_anchor == self.y_anchor:
            raise InputError("necklace anchors must be distinct")
        if self.x_anchor not in self.pattern or self.y_anchor not in self.pattern:
            raise InputError("necklace anchors must be pattern vertices")
        if not is_connected(self.pattern):
            raise InputError("necklace pattern must be connected")


class _Builder:
    def __init__(self):
        self.n = 0
        self.edges: list[tuple[int, int]] = []

    def fresh(self, k: int) -> list[int]:
        out = list(range(self.n, self.n + k))
        self.n += k
        return out

    def copy_pattern(self, h: Graph, only: Iterable[int] | None = None) -> dict[int, int]:
        verts = sorted(h.vertices if only is None else only)
        mp = dict(zip(verts, self.fresh(len(verts))))
        self.edges.extend((mp[a], mp[b]) for a, b in h.edges() if a in mp and b in mp)
        return mp

    def graph(self) -> Graph:
        return Graph.from_edges(self.n, self.edges)


# -- necklaces ----------------------------------------------------------------------


@dataclass(frozen=True)
class Necklace:
    graph: Graph
    beads: tuple[dict[int, int], ...]  # per bead: pattern vertex -> graph vertex

    @property
    def bead_sets(self) -> list[frozenset[int]]:
        return [frozenset(b.values()) for b in self.beads]


def _add_necklace(b: _Builder, s: NecklaceStructure, length: int) -> list[dict[int, int]]:
    beads = [b.copy_pattern(s.pattern) for _ in range(length)]
    for prev, nxt in zip(beads, beads[1:]):
        b.edges.append((prev[s.x_anchor], nxt[s.y_anchor]))
    return beads


def build_uniform_necklace(s: NecklaceStructure, length: int) -> Necklace:
    """``length`` copies of the pattern, bead i's x-anchor linked to bead i+1's y-anchor."""
    if length < 1:
        raise InputError("necklace length must be at least 1")
    b = _Builder()
    beads = _add_necklace(b, s, length)
    return Necklace(b.graph(), tuple(beads))


# -- variable gadget -------------------------------------------------------------------


@dataclass(frozen=True)
class Gadget:
    graph: Graph
    x_side: dict[int, int]  # pattern vertex (not v) -> vertex of X
    y_side: dict[int, int]
    blocks: dict[tuple[int, int], tuple[int, ...]]  # (i, j) -> D_{i,j}

    @property
    def X(self) -> frozenset[int]:
        return frozenset(self.x_side.values())

    @property
    def Y(self) -> frozenset[int]:
        return frozenset(self.y_side.values())

    def diagonal_copies(self) -> list[frozenset[int]]:
        """The c-1 disjoint pattern copies on ``D_{j,j}`` plus ``x_j, y_j``."""
        xs, ys = sorted(self.X), sorted(self.Y)
        return [frozenset(self.blocks[j, j]) | {xs[j], ys[j]} for j in range(len(xs))]


def _add_gadget(b: _Builder, h: Graph, v: int, x: int, y: int) -> Gadget:
    rest = sorted(h.vertices - {v})
    x_side = b.copy_pattern(h, rest)
    y_side = b.copy_pattern(h, rest)
    xs = [x_side[p] for p in rest]
    ys = [y_side[p] for p in rest]
    inner = sorted(h.vertices - {x, y})
    blocks = {}
    for i, xi in enumerate(xs):
        for j, yj in enumerate(ys):
            d = b.fresh(len(inner))
            phi = dict(zip(inner, d))
            phi[x] = xi
            phi[y] = yj
            b.edges.extend((phi[p], phi[q]) for p, q in h.edges())
            blocks[i, j] = tuple(d)
    return Gadget(Graph(), x_side, y_side, blocks)


def _check_gadget_args(h: Graph, v: int, x: int, y: int) -> None:
    if h.n < 3 or not is_biconnected(h):
        raise InputError("gadget pattern must be biconnected with at least 3 vertices")
    if not {v, x, y} <= h.vertices:
        raise InputError("v, x, y must be pattern vertices")
    if x == y:
        raise InputError("x and y must differ")


def build_gadget(h: Graph, v: int, x: int, y: int) -> Gadget:
    """The variable gadget: X and Y each induce ``h - v``; every pair ``(x_i, y_j)``
    is completed to a copy of ``h`` by ``c - 2`` fresh vertices.

    Has ``2(c-1) + (c-1)^2 (c-2)`` vertices for ``c = |V(h)|``.
    """
    _check_gadget_args(h, v, x, y)
    b = _Builder()
    gad = _add_gadget(b, h, v, x, y)
    return Gadget(b.graph(), gad.x_side, gad.y_side, gad.blocks)


def has_long_cycle(g: Graph, k: int) -> bool:
    """True iff ``g`` has a simple cycle with at least ``k`` vertices (a ``C_k`` minor)."""
    if k <= 3:
        return not is_forest(g)
    for s in sorted(g.vertices):
        # cycles whose smallest vertex is s
        allowed = {w for w in g.vertices if w > s}
        stack = [(s, iter(sorted(g.neighbors(s) & allowed)), 1)]
        on_path = {s}
        while stack:
            u, it, length = stack[-1]
            for w in it:
                if w in on_path:
                    continue
                if length + 1 >= k and s in g.neighbors(w):
                    return True
                on_path.add(w)
                stack.append((w, iter(sorted(g.neighbors(w) & allowed)), length + 1))
                break
            else:
                stack.pop()
                on_path.discard(u)
    return False


def _cycle_length(h: Graph) -> int | None:
    if h.n >= 3 and h.m == h.n and all(h.degree(v) == 2 for v in h.vertices) and is_connected(h):
        return h.n
    return None


def has_pattern_minor(g: Graph, h: Graph) -> bool:
    """Exact minor test, available for cycle patterns up to ``PATTERN_CAP`` vertices."""
    k = _cycle_length(h)
    if k is None or k > PATTERN_CAP:
        raise UnsupportedPatternError("exact minor testing only covers cycle patterns C3..C6")
    return has_long_cycle(g, k)


def gadget_violations(j: Gadget, h: Graph) -> list[frozenset[int]]:
    """Sets Z with |Z| <= c-1 for which 'no h-minor in J - Z' and 'Z is X or Y' disagree."""
    c = h.n
    xy = {j.X, j.Y}
    bad = []
    verts = sorted(j.graph.vertices)
    for size in range(c):
        for z in combinations(verts, size):
            z = frozenset(z)
            free = not has_pattern_minor(j.graph.remove(z), h)
            if free != (z in xy):
                bad.append(z)
    return bad


def verify_gadget(j: Gadget, h: Graph) -> bool:
    return not gadget_violations(j, h)


# -- CNF ------------------------------------------------------------------------------


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 0:
            raise InputError("negative variable count")
        for c in self.clauses:
            if not c:
                raise InputError("empty clause")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise InputError(f"literal {lit} out of range 1..{self.num_vars}")

    @property
    def occurrences(self) -> int:
        return sum(len(c) for c in self.clauses)

    def evaluate(self, assignment: dict[int, bool]) -> bool:
        return all(any(assignment[abs(l)] == (l > 0) for l in c) for c in self.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    header = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    start_line = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise ParseError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"malformed header {line!r}", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise ParseError(f"malformed header {line!r}", lineno)
            continue
        if header is None:
            raise ParseError("clause before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"non-integer literal {tok!r}", lineno) from None
            if lit == 0:
                if not current:
                    raise ParseError("empty clause", lineno)
                clauses.append(tuple(current))
                current = []
                continue
            if abs(lit) > header[0]:
                raise ParseError(f"literal {lit} out of range 1..{header[0]}", lineno)
            if not current:
                start_line = lineno
            current.append(lit)
    if header is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        raise ParseError("clause not terminated by 0", start_line)
    if len(clauses) != header[1]:
        raise ParseError(f"header announces {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], tuple(clauses))


def format_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    lines.extend(" ".join(str(l) for l in c) + " 0" for c in f.clauses)
    return "\n".join(lines) + "\n"


def brute_force_sat(f: CnfFormula) -> dict[int, bool] | None:
    """First satisfying assignment in truth-table order, or None."""
    for bits in product((False, True), repeat=f.num_vars):
        a = {i + 1: b for i, b in enumerate(bits)}
        if f.evaluate(a):
            return a
    return None


# -- the reduction ------------------------------------------------------------------------


@dataclass
class ReductionInstance:
    graph: Graph
    modulator: frozenset[int]
    budget: int
    pattern: Graph
    literal_sets: dict[int, tuple[int, ...]]  # +i -> V_{x_i}, -i -> V_{not x_i}
    gadgets: list[Gadget]
    clause_beads: list[list[frozenset[int]]]
    clause_links: list[list[int]]  # per clause, per bead: the vertex wired to its literal
    s0: frozenset[int]
    packing: list[frozenset[int]] = field(default_factory=list)

    def necklace_sets(self) -> list[frozenset[int]]:
        return [frozenset().union(*beads) for beads in self.clause_beads]

    def sidecar(self) -> dict:
        return {
            "budget": self.budget,
            "modulator": sorted(self.modulator),
            "literals": {str(k): list(v) for k, v in sorted(self.literal_sets.items())},
            "clauses": [[sorted(b) for b in beads] for beads in self.clause_beads],
            "clause_links": self.clause_links,
            "s0": sorted(self.s0),
        }


def reduce_cnf(
    f: CnfFormula, s: NecklaceStructure, gadget_vertices: tuple[int, int, int] | None = None
) -> ReductionInstance:
    """Graph, modulator and budget ``w + (c-1)n`` such that ``f`` is satisfiable iff
    some deletion set of at most the budget leaves no pattern minor.

    Vertex ids follow construction order: variable gadgets, clause necklaces, S0.
    """
    h = s.pattern
    c = h.n
    if not is_biconnected(h):
        raise ConstructionError("pattern must be biconnected with at least 3 vertices")
    gv, gx, gy = gadget_vertices if gadget_vertices is not None else (min(h.vertices), s.x_anchor, s.y_anchor)
    _check_gadget_args(h, gv, gx, gy)
    free = sorted(h.vertices - {s.x_anchor, s.y_anchor})
    if not free:
        raise ConstructionError("no bead vertex is free of inter-bead edges")
    link = free[0]

    b = _Builder()
    literal_sets: dict[int, tuple[int, ...]] = {}
    literal_maps: dict[int, dict[int, int]] = {}
    gadgets = []
    for i in range(1, f.num_vars + 1):
        gad = _add_gadget(b, h, gv, gx, gy)
        gadgets.append(gad)
        literal_maps[i], literal_maps[-i] = gad.x_side, gad.y_side
        literal_sets[i] = tuple(sorted(gad.X))
        literal_sets[-i] = tuple(sorted(gad.Y))

    clause_beads, clause_links, necklaces = [], [], []
    for clause in f.clauses:
        beads = _add_necklace(b, s, len(clause))
        links = []
        for bead, lit in zip(beads, clause):
            u = bead[link]
            side = literal_maps[lit]
            b.edges.extend((u, side[q]) for q in sorted(h.neighbors(gv)))
            links.append(u)
        necklaces.append(beads)
        clause_beads.append([frozenset(bd.values()) for bd in beads])
        clause_links.append(links)

    s0_map = b.copy_pattern(h)
    a, bb = h.edges()[0]
    b.edges.remove((s0_map[a], s0_map[bb]))
    for beads in necklaces:
        b.edges.append((s0_map[a], beads[0][s.y_anchor]))
        b.edges.append((s0_map[bb], beads[-1][s.x_anchor]))
    s0 = frozenset(s0_map.values())

    modulator = set(s0)
    for vs in literal_sets.values():
        modulator |= set(vs)
    packing = [bd for beads in clause_beads for bd in beads]
    for gad in gadgets:
        packing.extend(gad.diagonal_copies())
    return ReductionInstance(
        graph=b.graph(),
        modulator=frozenset(modulator),
        budget=f.occurrences + (c - 1) * f.num_vars,
        pattern=h,
        literal_sets=literal_sets,
        gadgets=gadgets,
        clause_beads=clause_beads,
        clause_links=clause_links,
        s0=s0,
        packing=packing,
    )


def _require_k3(inst: ReductionInstance) -> None:
    if _cycle_length(inst.pattern) != 3:
        raise UnsupportedPatternError("exact deletion search is implemented for the K3 pattern only")


def check_packing(inst: ReductionInstance) -> bool:
    """The packed sets are pairwise disjoint, each holds a pattern minor, and there are ``budget`` of them."""
    seen: set[int] = set()
    for p in inst.packing:
        if p & seen:
            return False
        seen |= p
        if not has_pattern_minor(inst.graph.induced(p), inst.pattern):
            return False
    return len(inst.packing) == inst.budget


def find_deletion_set(inst: ReductionInstance) -> frozenset[int] | None:
    """A feedback vertex set of size at most the budget, or None if none exists.

    The packing holds ``budget`` disjoint cycles, so any such set takes exactly
    one vertex from each packed set and nothing else.  Search over those
    choices with forced-choice propagation: a choice is dead once the vertices
    known to stay already contain a cycle.
    """
    _require_k3(inst)
    if not check_packing(inst):
        raise ConstructionError("packing is not a budget-sized family of disjoint cycles")
    g = inst.graph
    packed = [tuple(sorted(p)) for p in inst.packing]
    covered = frozenset().union(*inst.packing) if packed else frozenset()
    base_kept = g.vertices - covered

    def forest(vs) -> bool:
        return is_forest(g.induced(vs))

    if not forest(base_kept):
        return None

    def solve(choice: dict[int, int], kept: frozenset[int]):
        choice = dict(choice)
        while True:
            best = None
            forced = False
            for i, p in enumerate(packed):
                if i in choice:
                    continue
                opts = [v for v in p if forest(kept | (set(p) - {v}))]
                if not opts:
                    return None
                if len(opts) == 1:
                    choice[i] = opts[0]
                    kept = kept | (set(p) - {opts[0]})
                    forced = True
                    break
                if best is None or len(opts) < len(best[1]):
                    best = (i, opts)
            if forced:
                continue
            if best is None:
                return frozenset(choice.values())
            i, opts = best
            for v in opts:
                res = solve({**choice, i: v}, kept | (set(packed[i]) - {v}))
                if res is not None:
                    return res
            return None

    return solve({}, base_kept)


def extract_assignment(inst: ReductionInstance, deletion: Iterable[int]) -> dict[int, bool]:
    """Read a truth assignment off a deletion set: ``x_i`` is true iff ``V_{x_i}`` was deleted."""
    deletion = frozenset(deletion)
    out = {}
    n = len(inst.gadgets)
    for i in range(1, n + 1):
        pos, neg = set(inst.literal_sets[i]), set(inst.literal_sets[-i])
        if pos <= deletion:
            out[i] = True
        elif neg <= deletion:
            out[i] = False
        else:
            raise InputError(f"deletion set takes neither literal side of variable {i}")
    return out


def component_structure_ok(inst: ReductionInstance) -> bool:
    """Components of ``G - X`` are exactly the clause necklaces and the gadget blocks."""
    expected = set(inst.necklace_sets())
    for gad in inst.gadgets:
        expected.update(frozenset(d) for d in gad.blocks.values() if d)
    got = set(connected_components(inst.graph.remove(inst.modulator)))
    return got == expected


@dataclass
class EquivalenceReport:
    satisfiable: bool
    deletion_set: frozenset[int] | None
    assignment_ok: bool | None

    @property
    def holds(self) -> bool:
        return self.satisfiable == (self.deletion_set is not None) and self.assignment_ok is not False


def check_equivalence(f: CnfFormula, inst: ReductionInstance) -> EquivalenceReport:
    sat = brute_force_sat(f) is not None
    z = find_deletion_set(inst)
    ok = None
    if z is not None:
        ok = f.evaluate(extract_assignment(inst, z))
    return EquivalenceReport(sat, z, ok)


def k3_structure(x_anchor: int = 0, y_anchor: int = 1) -> NecklaceStructure:
    return NecklaceStructure(k3(), x_anchor, y_anchor)


def random_formula(rng, max_vars: int, max_clauses: int, max_len: int = 3) -> CnfFormula:
    n = rng.randint(1, max_vars)
    m = rng.randint(0, max_clauses)
    clauses = []
    for _ in range(m):
        k = rng.randint(1, min(max_len, n))
        vs = rng.sample(range(1, n + 1), k)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CnfFormula(n, tuple(clauses))


def all_formulas(num_vars: int, max_clauses: int) -> Sequence[CnfFormula]:
    """Every formula over ``num_vars`` variables with up to ``max_clauses`` clauses.

    Clauses are non-empty sets of non-complementary literals; order matters.
    """
    lits = [v for i in range(1, num_vars + 1) for v in (i, -i)]
    clause_pool = []
    for k in range(1, num_vars + 1):
        for combo in combinations(lits, k):
            if len({abs(l) for l in combo}) == k:
                clause_pool.append(combo)
    out = []
    for m in range(max_clauses + 1):
        for cls in product(clause_pool, repeat=m):
            out.append(CnfFormula(num_vars, cls))
    return out
