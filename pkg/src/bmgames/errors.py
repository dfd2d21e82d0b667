"""Exception hierarchy.

Two families matter to callers: :class:`ValidationError` for malformed
inputs (bad graphs, weights, anchors) and :class:`StrategyError` for
failures raised while a strategy or construction is running.  The CLI maps
them to exit codes 2 and 3.
"""


class BMError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(BMError, ValueError):
    pass


class StrategyError(BMError, RuntimeError):
    pass


class SinkVertex(ValidationError):
    def __init__(self, vertex):
        super().__init__(f"vertex {vertex!r} has no successor")
        self.vertex = vertex


class DanglingEdge(ValidationError):
    def __init__(self, edge):
        super().__init__(f"edge {edge!r} references an unknown vertex")
        self.edge = edge


class AnchorMismatch(ValidationError):
    pass


class EdgeViolation(ValidationError):
    pass


class NonPositiveWeight(ValidationError):
    pass


class MissingWeight(ValidationError):
    pass


class LoopNotClosed(ValidationError):
    pass


class UnknownBundle(ValidationError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown bundle"


class MissingTableEntry(StrategyError):
    pass


class IllegalMove(StrategyError):
    pass


class IllegalSetMove(StrategyError):
    def __init__(self, turn, player, reason=""):
        msg = f"IllegalSetMove at turn {turn} (player {player})"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
        self.turn = turn
        self.player = player


class ExplosionGuard(StrategyError):
    pass


class BudgetExceeded(StrategyError):
    pass


class LevelStuck(StrategyError):
    def __init__(self, level, detail=""):
        super().__init__(f"LevelStuck({level})" + (f": {detail}" if detail else ""))
        self.level = level


class NotSubProbOne(StrategyError):
    pass


class SelectionFailure(StrategyError):
    pass


class SearchExhausted(StrategyError):
    pass


class OutputEscapesBSCC(StrategyError):
    pass


class NoBSCCPath(StrategyError):
    pass


class TableIncomplete(StrategyError):
    pass
