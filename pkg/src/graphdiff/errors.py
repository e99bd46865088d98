"""Exception types, mapped onto CLI exit codes by graphdiff.cli."""


class GraphDiffError(Exception):
    """Base class for all library errors."""


class ValidationError(GraphDiffError):
    """Invalid inputs, malformed files, or violated preconditions (exit code 2)."""


class NumericalError(GraphDiffError):
    """Numerical failure: divergence, non-finite state (exit code 3)."""
