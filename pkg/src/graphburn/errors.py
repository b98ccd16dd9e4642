"""Exception hierarchy shared by every module."""


class GraphBurnError(Exception):
    pass


class ParseError(GraphBurnError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptyGraphError(GraphBurnError):
    pass


class ParameterError(GraphBurnError, ValueError):
    pass


class CapacityError(GraphBurnError):
    """A configured size or node budget was exceeded (distinct from infeasibility)."""


class DecodeError(GraphBurnError):
    pass


class BackendError(GraphBurnError):
    pass


class FormatError(GraphBurnError):
    pass
