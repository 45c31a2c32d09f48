"""Exception hierarchy shared by the library and the command line."""


class DMError(Exception):
    """Base class for package errors."""


class InvalidInput(DMError, ValueError):
    """Malformed or out-of-range input.  The CLI maps it to exit code 2."""


class ConditionFailed(DMError):
    """A checked mathematical condition does not hold (exit code 3)."""


class InconsistencyError(DMError, AssertionError):
    """Independent computations disagree.  This should never happen (exit code 4)."""


class HypothesisError(ConditionFailed):
    """A lemma's hypothesis fails, so its conclusion cannot be certified."""
