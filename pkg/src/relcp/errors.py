"""Exception hierarchy shared by all modules."""


class RelcpError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(RelcpError, ValueError):
    """Input data or an argument violates a documented precondition."""


class DegenerateSplitError(RelcpError):
    """A split sample or block range around a change point is empty.

    Parameters
    ----------
    message : str
        Human readable description.
    component : int or None
        Zero-based index of the offending component, when known.
    """

    def __init__(self, message: str, component: int | None = None):
        self.component = component
        if component is not None:
            message = f"component {component}: {message}"
        super().__init__(message)


class DegenerateMultiplierError(RelcpError):
    """All bootstrap multipliers of a replicate are zero."""


class ConfigurationError(RelcpError, ValueError):
    """Inconsistent user configuration (block length, thresholds, ...)."""
