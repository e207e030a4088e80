"""Graph orientation toolkit: pick directions for undirected edges so that
node pairs become reachable, with exhaustive oracles for small instances."""
from .graph import (
    GraphError,
    InfeasibleError,
    MixedGraph,
    Orientation,
    bridges_and_2ecc,
    satisfied_pairs,
    strong_orientation,
    topological_order,
    vertex_connectivity_value,
)
from .kernel import kernelize, lift_orientation
from .search import Infeasible, decide_tree_orientable, decide_undirected_orientable, oracle_max_orientation
from .maxorient import approx_max_orientation, decide_k_pairs
from .mixed import decide_mixed_orientable
from .steiner import steiner_forest_orientation
from .disjoint import solve_disjoint_paths_orientation
from .oracles import CapExceeded

__all__ = [
    "GraphError", "InfeasibleError", "CapExceeded", "Infeasible", "MixedGraph", "Orientation",
    "bridges_and_2ecc", "satisfied_pairs", "strong_orientation", "topological_order",
    "vertex_connectivity_value", "kernelize", "lift_orientation", "decide_tree_orientable",
    "decide_undirected_orientable", "oracle_max_orientation", "approx_max_orientation",
    "decide_k_pairs", "decide_mixed_orientable", "steiner_forest_orientation",
    "solve_disjoint_paths_orientation",
]
