"""
Exception hierarchy for the route minimization system
Every error derives from a builtin so callers catching ValueError/RuntimeError keep working
"""

from typing import Optional


class GesError(Exception):
    """Marker base for all errors raised by this package"""


class ContractViolationError(GesError, ValueError):
    """A caller broke an operation precondition (bad index, wrong state)"""


class InstanceParseError(GesError, ValueError):
    """Benchmark instance text could not be parsed"""

    def __init__(self, line_number: int, cause: str, source: Optional[str] = None):
        self.line_number = line_number
        self.cause = cause
        self.source = source
        where = f"{source}:" if source else "line "
        super().__init__(f"{where}{line_number}: {cause}")


class UnsolvableInstanceError(GesError, ValueError):
    """A request cannot be served even by a dedicated vehicle"""

    def __init__(self, request_id: int, reason: str):
        self.request_id = request_id
        self.reason = reason
        super().__init__(f"Request {request_id} is unsolvable: {reason}")


class SolutionWriteError(GesError, ValueError):
    """Refusal to emit a solution file for an incomplete solution"""


class OrchestrationError(GesError, RuntimeError):
    """Ring orchestration failed (disconnected channel, crashed worker)"""


class WatchdogTimeoutError(OrchestrationError):
    """The drain loop waited longer than the configured watchdog"""

    def __init__(self, message: str, ring_state: Optional[dict] = None):
        self.ring_state = ring_state or {}
        super().__init__(f"{message}; ring state: {self.ring_state}")
