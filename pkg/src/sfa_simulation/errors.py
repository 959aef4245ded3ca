"""
Error hierarchy for sfa-simulation.

Every failure raised by the library is a ``RuntimeError`` subclass carrying a
message that names the offending object, so callers that only care about
"something went wrong" can keep catching ``RuntimeError``.
"""
from typing import Optional


class SfaError(RuntimeError):
    """Base class for all library errors."""

    exit_code = 1


class UsageError(SfaError):
    """A precondition of an operation was violated."""

    exit_code = 1


class ParseError(UsageError):
    """Malformed predicate, automaton or regex text."""

    def __init__(self, message: str, position: Optional[int] = None, token: Optional[str] = None):
        self.position = position
        self.token = token
        where = f" at position {position}" if position is not None else ""
        near = f" (near {token!r})" if token is not None else ""
        super().__init__(f"{message}{where}{near}")


class ResourceError(SfaError):
    """A resource guard stopped a computation."""

    exit_code = 2
    outcome = "oom-guard"


class MintermBlowupError(ResourceError):
    """Minterm generation exceeded the configured cap."""

    outcome = "minterm-cap"

    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"minterm blowup: {count} minterms exceed cap {cap}")


class DeadlineExceeded(ResourceError):
    """A computation ran past its deadline."""

    outcome = "timeout"

    def __init__(self, timeout_ms: float):
        self.timeout_ms = timeout_ms
        super().__init__(f"timeout after {timeout_ms:g} ms")


class InvariantViolation(SfaError):
    """A debug-mode invariant check failed."""

    exit_code = 3
