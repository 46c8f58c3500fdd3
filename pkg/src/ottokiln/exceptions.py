"""Exception types shared across the package."""


class OttoKilnError(Exception):
    """Base class for all errors raised by this package."""


class UnderTruncationError(OttoKilnError):
    """The occupation ladder is too short: probability is piling up at the top level."""


class IntegrationError(OttoKilnError):
    """The fixed-step integrator violated a conservation or positivity guard."""


class RefrigeratorRegimeError(OttoKilnError):
    """Parameters put the machine in the refrigerator regime (hot occupation below cold)."""


class UndefinedEfficiencyError(OttoKilnError):
    """Efficiency is undefined because the cycle absorbed (numerically) zero heat."""


class ConfigError(OttoKilnError):
    """A configuration document failed validation. Carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
