"""Exception types shared across the toolkit."""


class ConvomineError(Exception):
    """Base class for all toolkit errors."""


class InputError(ConvomineError):
    """A data file or in-memory input violates its contract (CLI exit 1)."""


class ConfigError(ConvomineError):
    """A configuration value is missing, unknown, or out of range (CLI exit 2)."""
