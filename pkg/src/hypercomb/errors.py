"""Exception hierarchy shared by all hypercomb modules."""


class HypercombError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class SpecSyntaxError(HypercombError, ValueError):
    """A set-spec line could not be parsed."""

    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        if text:
            message = f"{message} at position {position}: {text!r}"
        super().__init__(message)


class EmptyWindowError(HypercombError, ValueError):
    """A window has no members where at least one is required."""


class UnsupportedSetError(HypercombError, TypeError):
    """The operation is not defined for this set representation."""


class ResourceLimitExceeded(HypercombError):
    """A configured window, node or time limit was hit (CLI exit code 3)."""


class VerificationError(HypercombError):
    """An internal postcondition check failed."""
