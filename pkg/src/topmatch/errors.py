"""Exception types shared across the package."""


class TopmatchError(Exception):
    """Base class for all errors raised by topmatch."""


class InputError(TopmatchError, ValueError):
    """Malformed or out-of-contract input."""


class SizeError(TopmatchError):
    """A configured size or search budget would be exceeded."""


class UndominatableError(TopmatchError):
    """An independent set contains a vertex with an empty neighborhood."""


class ProtocolError(TopmatchError):
    """An adversary callback returned something other than delete/explode."""


class CorruptionError(TopmatchError):
    """A transcript does not replay against its root graph."""
