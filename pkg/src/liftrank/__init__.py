"""Lift-and-project rank computations for stretched-clique graphs."""

from .graph import Graph, GraphError, alpha, complete, delete, destroy, omega, stable_sets
from .canon import CanonicalForm, are_isomorphic, canonical
from .graphio import from_graph6, to_graph6

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "GraphError",
    "alpha",
    "omega",
    "complete",
    "delete",
    "destroy",
    "stable_sets",
    "canonical",
    "CanonicalForm",
    "are_isomorphic",
    "from_graph6",
    "to_graph6",
]
