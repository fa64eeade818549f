"""Kernelization for FVS parameterized by a modulator to bounded elimination distance.

One round drops components of ``G - X`` whose optimal solution never
interacts with the modulator, then grows the modulator by one vertex per
component of maximal elimination distance.  Rounds repeat until ``G - X``
is a forest, where standard degree rules finish the job.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .elim import (
    EliminationForest,
    compute_elimination_forest,
    elimination_distance_to_forest,
    tree_decomposition_from_elimination_forest,
    tree_decomposition_for,
)
from .errors import InputError
from .graph import Graph, check_subset, connected_components, is_forest
from .solver import (
    FvsConstraint,
    exists_min_fvs_with,
    fvs_size,
    min_multiway_cut_on_tree,
    pack_t_paths,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundaryProfile:
    component: frozenset[int]
    s_high: frozenset[int]  # >= 2 neighbours in the modulator
    t_one: frozenset[int]  # exactly 1 neighbour in the modulator


@dataclass(frozen=True)
class GammaConfig:
    """Label-set bound ``gamma``; subsets ``X0`` up to ``subset_cap`` are enumerated.

    Kernels are only guaranteed sound when ``gamma >= gamma_bound(eta)``.
    """

    gamma: int
    subset_cap: int | None = None

    def tau(self, modulator_size: int) -> int:
        return modulator_size + 1 + 3 * self.gamma

    @property
    def effective_subset_cap(self) -> int:
        return 3 * self.gamma if self.subset_cap is None else self.subset_cap


@dataclass
class RoundStats:
    eta: int
    components: int
    components_dropped: int
    subsets_enumerated: int
    max_retained: int
    tau: int
    modulator_added: int = 0

    def as_dict(self) -> dict:
        return {
            "eta": self.eta,
            "components": self.components,
            "components_dropped": self.components_dropped,
            "subsets_enumerated": self.subsets_enumerated,
            "max_retained": self.max_retained,
            "tau": self.tau,
            "modulator_added": self.modulator_added,
        }


@dataclass
class KernelStep:
    """Reduced instance with ``fvs(original) = fvs(reduced) + delta``."""

    reduced: Graph
    delta: int
    modulator: frozenset[int]
    eta_remaining: int
    rounds: list[RoundStats] = field(default_factory=list)


def boundary_profile(g: Graph, x: Iterable[int], c: Iterable[int]) -> BoundaryProfile:
    x = check_subset(g, x, "modulator")
    c = frozenset(c)
    if c not in connected_components(g.remove(x)):
        raise InputError("vertex set is not a component of G - X")
    s_high, t_one = set(), set()
    for v in c:
        k = len(g.neighbors(v) & x)
        if k >= 2:
            s_high.add(v)
        elif k == 1:
            t_one.add(v)
    return BoundaryProfile(c, frozenset(s_high), frozenset(t_one))


def gamma_bound(eta: int) -> int:
    """Size bound on the reduced label sets for elimination distance ``eta``.

    Labelled elimination-tree nodes: at most ``3*eta*2**eta`` labelled children
    per node over ``eta`` levels gives ``sum_i (3*eta*2**eta)**i`` nodes.  Per
    bag: ``eta + 1`` S-labels, and T-labels from either the ``2*eta + 2`` path
    endpoints or the ``2*eta*(eta + 2) + eta`` marked terminals.
    gamma_bound(0) = 3, gamma_bound(1) = 63, gamma_bound(2) = 12621.
    """
    if eta < 0:
        raise InputError("eta must be non-negative")
    branching = 3 * eta * 2**eta
    nodes = sum(branching**i for i in range(eta + 1))
    per_bag = (eta + 1) + max(2 * eta + 2, 2 * eta * (eta + 2) + eta)
    return nodes * per_bag


def _component_ed(g: Graph, comp: frozenset[int], eta: int) -> EliminationForest:
    ef = compute_elimination_forest(g.induced(comp), eta)
    if ef is None:
        raise InputError(f"component with smallest vertex {min(comp)} has elimination distance > {eta}")
    return ef


def reduce_components(g: Graph, x: Iterable[int], eta: int, cfg: GammaConfig | None = None) -> KernelStep:
    """Drop components of ``G - X`` that admit a modulator-compatible optimum for every ``X0``."""
    x = check_subset(g, x, "modulator")
    cfg = GammaConfig(gamma_bound(eta)) if cfg is None else cfg
    tau = cfg.tau(len(x))
    comps = connected_components(g.remove(x))
    subs: dict[frozenset[int], Graph] = {}
    tds = {}
    for comp in comps:
        sub = g.induced(comp)
        subs[comp] = sub
        tds[comp] = tree_decomposition_from_elimination_forest(sub, _component_ed(g, comp, eta))

    xs = sorted(x)
    # modulator neighbours of each component vertex
    nbx = {v: g.neighbors(v) & x for comp in comps for v in comp}
    cache: dict[tuple, bool] = {}
    kept: set[frozenset[int]] = set()
    n_subsets = 0
    max_retained = 0
    for size in range(min(cfg.effective_subset_cap, len(xs)) + 1):
        for x0 in combinations(xs, size):
            n_subsets += 1
            x0 = frozenset(x0)
            bad = []
            for comp in comps:
                s = frozenset(v for v in comp if len(nbx[v] & x0) >= 2)
                t = frozenset(v for v in comp if len(nbx[v] & x0) == 1)
                if not s and len(t) < 2:
                    continue
                key = (comp, s, t)
                if key not in cache:
                    cache[key] = exists_min_fvs_with(subs[comp], tds[comp], FvsConstraint(s, t))
                if not cache[key]:
                    bad.append(comp)
            retained = bad[:tau]
            max_retained = max(max_retained, len(retained))
            kept.update(retained)
    dropped = [c for c in comps if c not in kept]
    delta = sum(fvs_size(subs[c], tds[c]) for c in dropped)
    keep_vertices = set(x)
    for c in kept:
        keep_vertices |= c
    stats = RoundStats(eta, len(comps), len(dropped), n_subsets, max_retained, tau)
    log.debug("eta=%d: dropped %d of %d components over %d subsets", eta, len(dropped), len(comps), n_subsets)
    return KernelStep(g.induced(keep_vertices), delta, x, eta, [stats])


def extend_modulator(g: Graph, x: Iterable[int], eta: int) -> frozenset[int]:
    """Add to ``x`` one vertex per component of ``G - X`` at distance exactly ``eta``."""
    if eta < 1:
        raise InputError("extend_modulator needs eta >= 1")
    x = check_subset(g, x, "modulator")
    out = set(x)
    for comp in connected_components(g.remove(x)):
        sub = g.induced(comp)
        d = elimination_distance_to_forest(sub, eta)
        if d is None:
            raise InputError(f"component with smallest vertex {min(comp)} has elimination distance > {eta}")
        if d < eta:
            continue
        for v in sorted(comp):
            if elimination_distance_to_forest(sub.remove({v}), eta - 1) is not None:
                out.add(v)
                break
    return frozenset(out)


def base_case_kernel(g: Graph, x: Iterable[int]) -> KernelStep:
    """Exhaustive degree rules for a graph whose ``G - X`` is a forest.

    Vertices of degree at most one are deleted.  A degree-2 vertex outside
    ``X`` with non-adjacent neighbours is bypassed.  When its neighbours are
    adjacent and one of them also has degree 2, the triangle hangs off the
    third vertex, which is taken into the solution.
    """
    x = check_subset(g, x, "modulator")
    if not is_forest(g.remove(x)):
        raise InputError("G - X is not a forest")
    adj = {v: set(g.neighbors(v)) for v in g.vertices}
    delta = 0

    def delete(v):
        for w in adj.pop(v):
            adj[w].discard(v)

    changed = True
    while changed:
        changed = False
        for v in sorted(adj):
            if v not in adj:
                continue
            if len(adj[v]) <= 1:
                delete(v)
                changed = True
            elif len(adj[v]) == 2 and v not in x:
                a, b = sorted(adj[v])
                if b not in adj[a]:
                    delete(v)
                    adj[a].add(b)
                    adj[b].add(a)
                    changed = True
                elif len(adj[a]) == 2 or len(adj[b]) == 2:
                    forced = b if len(adj[a]) == 2 else a
                    delete(forced)
                    delta += 1
                    changed = True
    edges = [(u, w) for u in adj for w in adj[u] if u < w]
    reduced = Graph(adj, edges)
    return KernelStep(reduced, delta, x & reduced.vertices, 0)


def kernelize(g: Graph, x: Iterable[int], eta: int, cfg: GammaConfig | None = None) -> KernelStep:
    """Reduce round by round from ``eta`` down to the forest base case.

    With ``cfg`` omitted each round uses ``gamma_bound`` of its own level.
    """
    x = check_subset(g, x, "modulator")
    if eta < 0:
        raise InputError("eta must be non-negative")
    if elimination_distance_to_forest(g.remove(x), eta) is None:
        raise InputError(f"G - X has elimination distance to a forest above {eta}")
    delta = 0
    rounds: list[RoundStats] = []
    for level in range(eta, 0, -1):
        level_cfg = cfg if cfg is not None else GammaConfig(gamma_bound(level))
        step = reduce_components(g, x, level, level_cfg)
        g, delta = step.reduced, delta + step.delta
        grown = extend_modulator(g, x, level)
        stats = step.rounds[0]
        stats.modulator_added = len(grown) - len(x)
        rounds.append(stats)
        x = grown
    base = base_case_kernel(g, x)
    return KernelStep(base.reduced, delta + base.delta, base.modulator, 0, rounds)


# -- label-set reductions -----------------------------------------------------------


def _bad(g: Graph, td, s: frozenset[int], t: frozenset[int]) -> bool:
    """Every minimum FVS misses a vertex of ``s`` or leaves two of ``t`` connected."""
    return not exists_min_fvs_with(g, td, FvsConstraint(s, t))


def minimize_label_sets(g: Graph, s: Iterable[int], t: Iterable[int], td=None) -> tuple[frozenset[int], frozenset[int]]:
    """Inclusion-minimal ``(s*, t*)`` that still no minimum FVS can satisfy.

    Labels are dropped one at a time in ascending vertex id.  One pass is
    enough: the property only gets harder to keep as labels go.
    """
    s = check_subset(g, s, "S")
    t = check_subset(g, t, "T")
    td = tree_decomposition_for(g) if td is None else td
    if not _bad(g, td, s, t):
        raise InputError("some minimum feedback vertex set contains S and separates T")
    labels = sorted([(v, 0) for v in s] + [(v, 1) for v in t])
    for v, kind in labels:
        if kind == 0:
            trial_s, trial_t = s - {v}, t
        else:
            trial_s, trial_t = s, t - {v}
        if _bad(g, td, trial_s, trial_t):
            s, t = trial_s, trial_t
    return s, t


def max_labeled_children(ef: EliminationForest, labels: Iterable[int]) -> int:
    """Largest number of children of one node whose subtree holds a label."""
    labels = frozenset(labels)
    best = 0
    for u in ef.nodes:
        best = max(best, sum(1 for c in ef.children(u) if ef.closed_tree(c) & labels))
    return best


def reduce_leaf_bag_labels(
    g: Graph, ef: EliminationForest, leaf: int, s: Iterable[int], t: Iterable[int]
) -> tuple[frozenset[int], frozenset[int]]:
    """Shrink the labels inside one leaf bag to a size depending on the height only.

    S-labels in the bag are cut to ``eta + 1``.  If the bag's terminals need
    more than ``eta`` vertices to separate, the endpoints of ``eta + 1``
    disjoint terminal paths are kept.  Otherwise, with a small cut ``Z``, up to
    ``eta + 2`` terminal components are kept per cut vertex and per tail vertex,
    plus the terminals in ``Z``.
    """
    s = check_subset(g, s, "S")
    t = check_subset(g, t, "T")
    if leaf not in ef.parent or not ef.is_leaf(leaf):
        raise InputError(f"node {leaf} is not a leaf of the elimination forest")
    eta = ef.height
    bag = ef.bags[leaf]
    s_bag = sorted(s & bag)
    s_out = (s - bag) | frozenset(s_bag[: eta + 1])

    t_bag = t & bag
    if len(t_bag) <= 2 * eta + 2:
        return s_out, t
    tree = g.induced(bag)
    cut = min_multiway_cut_on_tree(tree, t_bag)
    if len(cut) > eta:
        paths = pack_t_paths(tree, t_bag, len(cut))[: eta + 1]
        kept_t = frozenset(v for p in paths for v in p.endpoints)
        return s_out, (t - bag) | kept_t

    comps = [c for c in connected_components(tree.remove(cut)) if c & t_bag]
    marked: set[frozenset[int]] = set()
    for z in sorted(cut):
        near = [c for c in comps if tree.neighborhood(c) & {z}]
        marked.update(near[: eta + 2])
    for u in sorted(ef.tail(leaf)):
        near = [c for c in comps if g.neighbors(u) & c]
        marked.update(near[: eta + 2])
    kept_t = set(cut & t_bag)
    for c in marked:
        kept_t |= c & t_bag
    return s_out, (t - bag) | frozenset(kept_t)
