"""Feedback vertex set kernelization via elimination distance to a forest."""

__version__ = "0.1.0"

from .elim import (
    EliminationForest,
    TreeDecomposition,
    compute_elimination_forest,
    elimination_distance_to_forest,
    tree_decomposition_from_elimination_forest,
    validate_elimination_forest,
)
from .graph import (
    Graph,
    biconnected_components,
    brute_force_fvs,
    connected_components,
    enumerate_minimum_fvs,
    find_cycle,
    is_feedback_vertex_set,
)
from .kernel import GammaConfig, KernelStep, gamma_bound, kernelize, reduce_components
from .reduction import CnfFormula, NecklaceStructure, build_gadget, reduce_cnf, verify_gadget
from .solver import FvsConstraint, exists_min_fvs_with, fvs_size, min_multiway_cut_on_tree, pack_t_paths

__all__ = [
    "CnfFormula",
    "EliminationForest",
    "FvsConstraint",
    "GammaConfig",
    "Graph",
    "KernelStep",
    "NecklaceStructure",
    "TreeDecomposition",
    "biconnected_components",
    "brute_force_fvs",
    "build_gadget",
    "compute_elimination_forest",
    "connected_components",
    "elimination_distance_to_forest",
    "enumerate_minimum_fvs",
    "exists_min_fvs_with",
    "find_cycle",
    "fvs_size",
    "gamma_bound",
    "is_feedback_vertex_set",
    "kernelize",
    "min_multiway_cut_on_tree",
    "pack_t_paths",
    "reduce_cnf",
    "reduce_components",
    "tree_decomposition_from_elimination_forest",
    "validate_elimination_forest",
    "verify_gadget",
]
