"""Exception types raised across the package."""


class LeaderHinfError(Exception):
    """Base class for all package errors."""


class GraphError(LeaderHinfError, ValueError):
    """Invalid leader graph."""


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class AntiParallelPairError(GraphError):
    pass


class LeaderHasInEdgeError(GraphError):
    pass


class EmptyLeaderSetError(GraphError):
    pass


class NodeOutOfRangeError(GraphError):
    pass


class AlreadyUndirectedError(GraphError):
    pass


class EmptySetError(GraphError):
    pass


class BadParamsError(LeaderHinfError, ValueError):
    pass


class AssumptionViolatedError(LeaderHinfError):
    """Some follower is not reachable from any leader."""


class DisconnectedError(LeaderHinfError):
    pass


class NotBalancedError(LeaderHinfError):
    pass


class NotTreeError(LeaderHinfError):
    pass


class NotOnPathError(LeaderHinfError):
    pass


class TooLargeForBruteForceError(LeaderHinfError):
    pass


class ParseError(LeaderHinfError, ValueError):
    """Malformed graph file; carries the offending line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SingularError(LeaderHinfError, ArithmeticError):
    pass


class SingularUpdateError(SingularError):
    pass


class NoConvergenceError(LeaderHinfError, ArithmeticError):
    pass


class StructureViolatedError(LeaderHinfError):
    pass


class PositivityViolatedError(LeaderHinfError):
    """Frequency sweep exceeded the DC gain of a positive system."""


class UnstableStepError(LeaderHinfError, ArithmeticError):
    pass


class NotConvergedError(LeaderHinfError):
    pass
