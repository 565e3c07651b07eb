"""Spectral analysis of the normalized Laplacian of signed directed graphs."""
from .graph import Graph, GraphError, from_edge_list, from_matrix
from .laplacian import PreconditionError
from .eig import EigenSolverError, Spectrum, eigvals, spectrum

__all__ = [
    "Graph",
    "GraphError",
    "from_edge_list",
    "from_matrix",
    "PreconditionError",
    "EigenSolverError",
    "Spectrum",
    "eigvals",
    "spectrum",
]
__version__ = "0.1.0"
