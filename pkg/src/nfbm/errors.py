"""Exception types shared across the simulator."""


class NfbmError(Exception):
    """Base class for all simulator errors."""


class ValidationError(NfbmError, ValueError):
    """An input violates a precondition (bad dimensions, non-positive scalars, ...)."""


class SingularGeometryError(ValidationError):
    """Two array elements coincide, so a per-pair channel gain is undefined."""


class DegenerateChannelError(NfbmError, ValueError):
    """A channel or gain vector is identically zero."""


class DomainError(NfbmError, ValueError):
    """A parameter lies outside the mathematically feasible range."""


class ConfigError(NfbmError, ValueError):
    """A configuration file or override cannot be parsed or is inconsistent."""


class UnknownPresetError(ConfigError):
    """Requested preset name is not registered."""
