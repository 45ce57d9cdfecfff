"""Exception types shared across the package."""


class TokenChainError(Exception):
    """Base class for all errors raised by tokenchain."""


class ParseError(TokenChainError, ValueError):
    """Malformed edge-list input."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(TokenChainError, ValueError):
    """Input violates a structural constraint (self-loop, bad subset, ...)."""


class HypothesisError(TokenChainError):
    """A graph fails a hypothesis required by an operation.

    ``hypothesis`` is one of ``"regularity"``, ``"connectivity of L"`` or
    ``"connectivity of L^c"``.
    """

    def __init__(self, hypothesis, message=None):
        self.hypothesis = hypothesis
        super().__init__(message or f"hypothesis violated: {hypothesis}")


class SizeError(TokenChainError):
    """A requested explicit construction exceeds its configured cap."""
