"""Exception types shared across the package."""


class EddegError(Exception):
    """Base class."""


class StructuralError(EddegError, ValueError):
    """Malformed input: arity mismatch, bad shape, unparsable text."""


class DomainError(EddegError, ValueError):
    """Input outside the mathematical domain of an operation."""


class RetrySignal(EddegError):
    """The data point is not generic enough; draw a new one and try again."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason
