"""Exact computations around rainbow matchings, Latin square transversals,
and the homological connectivity of independence and matching complexes."""

from .errors import CorruptionError, InputError, ProtocolError, SizeError, UndominatableError
from .graphcore import Graph
from .homology import INFINITY

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "INFINITY",
    "CorruptionError",
    "InputError",
    "ProtocolError",
    "SizeError",
    "UndominatableError",
]
