"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Malformed input. ``path`` names the offending field, e.g. ``acts.Trees.u``."""

    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class NotVerificationCapacity(ValueError):
    """Raised when a capacity cannot come from an expected verification utility."""


class PreconditionError(ValueError):
    pass


class SearchExhausted(RuntimeError):
    """A deterministic witness search ran out of candidates at the given resolution."""
