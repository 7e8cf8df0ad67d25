"""Exception hierarchy shared by the library and the command-line front end."""

from __future__ import annotations


class JSJError(Exception):
    """Base class for every error raised by :mod:`jsjtree`."""


class InvalidInputError(JSJError, ValueError):
    """An argument violates an operation's precondition."""


class ParseError(InvalidInputError):
    """A document could not be parsed.

    ``line`` and ``column`` are 1-based positions when the failure is
    syntactic; ``path`` names the offending JSON location otherwise.
    """

    def __init__(self, message: str, *, line: int | None = None,
                 column: int | None = None, path: str | None = None):
        self.line = line
        self.column = column
        self.path = path
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if path is not None:
            where.append(f"at {path}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class PreconditionError(InvalidInputError):
    """A construction refused its input; ``failed`` lists the failed checks."""

    def __init__(self, message: str, failed: tuple[str, ...] = ()):
        self.failed = tuple(failed)
        super().__init__(message)


class NoMatchingError(JSJError):
    """A layer of a P-manifold admits no matching."""

    def __init__(self, layer: int):
        self.layer = layer
        super().__init__(f"layer {layer} admits no matching")


class ResourceLimitError(JSJError):
    """A search exceeded its hard size guard."""


class Cancelled(JSJError):
    """A long-running enumeration was cancelled cooperatively."""


class InternalError(JSJError):
    """An invariant that the algorithms guarantee was observed to fail."""
