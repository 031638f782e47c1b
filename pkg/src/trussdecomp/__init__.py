"""Truss decomposition: in-memory peeling plus bottom-up and top-down
algorithms over a simulated external-memory store."""

from .analysis import (
    CoreLabeling,
    OracleTooLarge,
    clustering_coefficient,
    core_decompose,
    oracle_decompose,
    truss_vs_core,
    verify_labeling,
)
from .bottomup import BottomUpResult, decompose_bottomup, lower_bounding
from .external import (
    BudgetInfeasible,
    ExternalStore,
    MemoryBudget,
    ScanCounter,
    Workspace,
    extract_neighborhood,
    pack_edges,
    partition_vertices,
    scan_report,
)
from .graph import (
    EdgeNotFound,
    Graph,
    ParseError,
    VertexNotFound,
    example_graph,
    generate_graph,
    load_graph,
)
from .inmem import TrussLabeling, decompose_baseline, decompose_improved, load_labeling
from .support import PeelOrder, ProbeStats, compute_support, peel
from .topdown import TopDownResult, decompose_topdown, upper_bounding

__version__ = "0.1.0"

__all__ = [
    "BottomUpResult",
    "BudgetInfeasible",
    "CoreLabeling",
    "EdgeNotFound",
    "ExternalStore",
    "Graph",
    "MemoryBudget",
    "OracleTooLarge",
    "ParseError",
    "PeelOrder",
    "ProbeStats",
    "ScanCounter",
    "TopDownResult",
    "TrussLabeling",
    "VertexNotFound",
    "Workspace",
    "clustering_coefficient",
    "compute_support",
    "core_decompose",
    "decompose_baseline",
    "decompose_bottomup",
    "decompose_improved",
    "decompose_topdown",
    "extract_neighborhood",
    "example_graph",
    "generate_graph",
    "load_graph",
    "load_labeling",
    "lower_bounding",
    "oracle_decompose",
    "pack_edges",
    "partition_vertices",
    "peel",
    "scan_report",
    "truss_vs_core",
    "upper_bounding",
    "verify_labeling",
]
