"""Exception types shared by the library and the command line."""
from __future__ import annotations


class OracleError(ValueError):
    """Base class for invalid input handed to dsoracle."""


class GraphFormatError(OracleError):
    """Malformed graph file or graph description."""


class QueryError(OracleError):
    """Query arguments outside the oracle's contract (v == x, x == root, ...)."""


class UnweightedRequiredError(OracleError):
    def __init__(self, what: str = "this oracle"):
        super().__init__(f"unweighted required: {what} only accepts unit-weight graphs")


class ContainerError(OracleError):
    """Oracle container that cannot be loaded (version, fingerprint, payload)."""


class InvariantViolation(AssertionError):
    """A structural lemma checked during a build did not hold."""

    def __init__(self, message: str, *vertices: int):
        self.vertices = tuple(vertices)
        if vertices:
            message = f"{message} (vertices: {', '.join(map(str, vertices))})"
        super().__init__(message)
