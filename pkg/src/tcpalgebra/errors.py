"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class TcpError(Exception):
    """Base class for all errors raised by tcpalgebra."""


class SortMismatch(TcpError):
    """An expression (or LTS operand) does not have the sort it must have.

    ``path`` locates the offending subterm, as a tuple of steps from the
    root (``"lhs"``, ``"rhs"``, ``"branch[2]"``, ``"binding[X]"`` ...).
    """

    def __init__(self, message, path=(), line=None, column=None):
        self.path = tuple(path)
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"{line}:{column}: "
        if self.path:
            message = f"{message} (at {'/'.join(self.path)})"
        super().__init__(where + message)


class ParseError(TcpError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class UnknownName(ParseError):
    pass


class MissingTau(ParseError):
    pass


class SchemaError(ParseError):
    """A JSON document is well-formed but violates the LTS schema."""


class UnknownAction(SchemaError):
    pass


class DepthExceeded(TcpError):
    pass


class StateBoundExceeded(TcpError):
    """State-space exploration hit its bound; ``partial`` is what was built."""

    def __init__(self, bound, partial=None):
        self.bound = bound
        self.partial = partial
        n = len(partial.states) if partial is not None else "?"
        super().__init__(f"state bound {bound} exceeded ({n} states explored)")


class UnknownState(TcpError):
    pass


class NotLight(TcpError):
    pass
