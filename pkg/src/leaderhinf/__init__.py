"""H-infinity performance of leader-follower consensus on directed and undirected graphs."""

from .bounds import (
    BoundsReport,
    GammaVerdict,
    Verdict,
    balanced_bound,
    certify_gamma,
    directed_bounds,
    tree_bounds,
    undirected_bounds,
)
from .generators import generate
from .graph import (
    DegreeStats,
    GroundedLaplacian,
    LeaderGraph,
    build_graph,
    check_assumption1,
    closeness_centrality,
    degree_stats,
    edge_boundary,
    grounded_laplacian,
    undirected_counterpart,
)
from .hinf import HinfReport, hinf_norm, hinf_verify_sweep
from .io import read_graph, write_graph

__all__ = [
    "BoundsReport", "GammaVerdict", "Verdict", "balanced_bound", "certify_gamma",
    "directed_bounds", "tree_bounds", "undirected_bounds", "generate", "DegreeStats",
    "GroundedLaplacian", "LeaderGraph", "build_graph", "check_assumption1",
    "closeness_centrality", "degree_stats", "edge_boundary", "grounded_laplacian",
    "undirected_counterpart", "HinfReport", "hinf_norm", "hinf_verify_sweep",
    "read_graph", "write_graph",
]
