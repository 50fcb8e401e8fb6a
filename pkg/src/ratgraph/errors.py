class RatGraphError(Exception):
    """Base class for every error raised by this package."""


class AlphabetError(RatGraphError, ValueError):
    """A letter or word does not belong to the declared alphabet."""


class ClassError(RatGraphError):
    """An object does not belong to the transducer/automaton class an operation needs."""


class FreshSymbolError(RatGraphError):
    """A symbol that must be fresh already occurs in an input alphabet."""


class PreconditionError(RatGraphError):
    """A structural precondition of a construction is violated."""


class FormatError(RatGraphError, ValueError):
    """A serialized object is malformed."""
