"""Exception types shared across the library."""


class KvoteError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(KvoteError, ValueError):
    """An argument violates a documented precondition."""


class ResourceLimitError(KvoteError, RuntimeError):
    """An enumeration or search budget would be exceeded."""


class ParseError(KvoteError, ValueError):
    """A file could not be parsed; carries line/column position."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
