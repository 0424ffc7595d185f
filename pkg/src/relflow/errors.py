"""Exception types shared across the package."""


class RelflowError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(RelflowError):
    """A data file could not be parsed.

    Carries the offending path and 1-based line number so CLI users can
    find the bad line.
    """

    def __init__(self, path, line_no, message):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{self.path}:{line_no}: {message}")


class GraphError(RelflowError):
    """A graph-domain precondition was violated (unknown node, excluded
    node, degenerate input, ...)."""
