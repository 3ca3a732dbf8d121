"""Exception hierarchy shared across the package."""


class UmilinkError(ValueError):
    """Base class for all domain-specific errors."""


class DomainError(UmilinkError):
    """An argument lies outside the mathematical domain of an operation."""


class GeometryError(UmilinkError):
    """Node positions violate the geometric assumptions of the model."""


class NadirError(GeometryError):
    """Boresight geometry: the linearized angle statistics are singular here."""


class UsageError(UmilinkError):
    """An operation was called with an inconsistent configuration."""


class DegenerateError(UmilinkError):
    """A statistic is undefined because the configuration is degenerate."""


class ConfigError(UmilinkError):
    """A configuration file failed to parse or validate."""
