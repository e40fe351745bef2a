from pydantic import ValidationError


class AutoBinningError(Exception):
    """Base class for every error raised by the binning engine."""


class DataError(AutoBinningError, ValueError):
    """Input data violates a contract: unparsable cells, missing values, bad target, schema mismatch."""


class ConfigError(AutoBinningError, ValueError):
    """A configuration value is out of its valid range."""


class SolverError(AutoBinningError, RuntimeError):
    """The optimizer met a non-finite objective."""


class InvariantViolation(AutoBinningError, RuntimeError):
    """An internal invariant did not hold."""


def config_error_from(error: ValidationError) -> ConfigError:
    """
    Convert a pydantic validation error into a ConfigError carrying its first message.

    Args:
        error: The validation error raised while building a config model.

    Returns:
        ConfigError: Error whose message names the offending field.
    """
    first = error.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ())) or "config"
    return ConfigError(f"invalid {location}: {first.get('msg', str(error))}")
