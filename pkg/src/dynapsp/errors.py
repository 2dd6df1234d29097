"""Exception hierarchy shared by every engine in the package."""


class DynApspError(Exception):
    """Base class for all errors raised by dynapsp."""


class MalformedUpdateError(DynApspError, ValueError):
    """A vertex or edge update violates the graph invariants."""


class ModeError(DynApspError):
    """An operation was called in a weight mode it does not support."""


class InvariantError(DynApspError, AssertionError):
    """Internal state is inconsistent; indicates a bug or stale input."""


class StalePriceError(InvariantError):
    """Dijkstra met a negative reduced edge weight."""


class ParameterError(DynApspError, ValueError):
    """Invalid tuning parameters (h, delta, tau, phase length, ...)."""


class QueryForbiddenError(DynApspError):
    """Queries are not served while the graph contains a negative cycle."""


class NoPathError(DynApspError):
    """A path was requested for an unreachable pair."""


class NotADagError(DynApspError, ValueError):
    """The graph (or a proposed insertion) contains a directed cycle."""


class HittingSetPreconditionError(DynApspError, ValueError):
    """A set handed to the greedy hitting-set routine is too small."""


class TraceParseError(DynApspError, ValueError):
    """A trace file line could not be parsed; ``line`` is 1-based."""

    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class OracleMismatch(DynApspError):
    """An engine answer disagrees with the from-scratch oracle.

    ``record`` is a self-contained reproduction: graph dump, op index and both
    answers.
    """

    def __init__(self, record: dict):
        super().__init__(f"oracle mismatch at op {record.get('index')}: {record.get('detail')}")
        self.record = record
