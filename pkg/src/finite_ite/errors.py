"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Bad user input: out-of-range index, invalid probability, malformed file."""


class ResourceError(RuntimeError):
    """A requested register or grid exceeds the configured memory caps."""


class UnreachableError(RuntimeError):
    """The requested target cannot be reached (e.g. zero ground-space overlap)."""
