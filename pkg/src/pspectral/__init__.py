"""p-spectral radii of uniform hypergraphs: numerical solvers, exact rational
certification of the extremal inequalities, and a verification harness."""

__version__ = "0.1.0"

from .hypergraph import (
    ClassTuple,
    UniformHypergraph,
    WeightVector,
    balanced_edge_bound,
    balanced_tuple,
    build_complete_chromatic,
    complete_graph,
    edge_count,
    polyform,
    weak_chromatic_number,
)
from .solver import SolverConfig, SpectralResult, lambda_p_classes, lambda_p_dense

__all__ = [
    "ClassTuple",
    "UniformHypergraph",
    "WeightVector",
    "balanced_edge_bound",
    "balanced_tuple",
    "build_complete_chromatic",
    "complete_graph",
    "edge_count",
    "polyform",
    "weak_chromatic_number",
    "SolverConfig",
    "SpectralResult",
    "lambda_p_classes",
    "lambda_p_dense",
    "__version__",
]
