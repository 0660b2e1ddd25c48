"""Graphs that allow a symmetric matrix with a square characteristic polynomial."""

from .errors import (
    CapacityError,
    CertificationError,
    EvenSpecError,
    Graph6Error,
    PreconditionError,
    SoundnessError,
)
from .graphs import Graph, parse_graph6, write_graph6
from .linalg import SymMatrix, certify_square

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "CertificationError",
    "EvenSpecError",
    "Graph",
    "Graph6Error",
    "PreconditionError",
    "SoundnessError",
    "SymMatrix",
    "certify_square",
    "parse_graph6",
    "write_graph6",
]
