"""Exception types shared across the package."""


class ValidityRangeError(ValueError):
    """Wavelength outside a fiber model's validity range."""


class ConfigError(ValueError):
    """Invalid or unparseable run configuration (CLI exit code 2)."""


class FitError(RuntimeError):
    """Degenerate design matrix or otherwise unusable fit input."""


class InsufficientStatisticsError(RuntimeError):
    """No post-selected events to estimate a QBER from."""
