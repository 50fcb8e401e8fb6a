"""Rational graphs, tiling systems and cellular automata as word acceptors."""

from .automata import EPS, Nfa, format_word, parse_word
from .cellular import CellularAutomaton
from .errors import (
    AlphabetError,
    ClassError,
    FormatError,
    FreshSymbolError,
    PreconditionError,
    RatGraphError,
)
from .graphs import InfiniteAutomaton, PathWitness, RationalGraph
from .tiling import TilingSystem
from .transducers import Transducer, TransducerClass

__all__ = [
    "EPS",
    "AlphabetError",
    "CellularAutomaton",
    "ClassError",
    "FormatError",
    "FreshSymbolError",
    "InfiniteAutomaton",
    "Nfa",
    "PathWitness",
    "PreconditionError",
    "RatGraphError",
    "RationalGraph",
    "TilingSystem",
    "Transducer",
    "TransducerClass",
    "format_word",
    "parse_word",
]
