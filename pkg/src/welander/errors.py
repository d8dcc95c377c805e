"""Exception hierarchy for the welander package."""


class WelanderError(Exception):
    """Base class for all errors raised by this package."""


class NonSmoothError(WelanderError):
    """An operation requiring a smooth field was called with epsilon = 0."""


class BracketError(WelanderError):
    """A root bracket could not be established where one was expected."""


class ScanWindowError(WelanderError):
    """A sign change of the equilibrium reduction lies at the scan boundary."""


class ConvergenceError(WelanderError):
    """An iterative solve (Newton, integration, attractor search) failed."""


class StepUnderflowError(ConvergenceError):
    """The integrator step size underflowed; reports the last valid time."""

    def __init__(self, message, last_time=None):
        super().__init__(message)
        self.last_time = last_time


class TangentialContactError(WelanderError):
    """A switching-line crossing turned out to be a tangential (double-root) contact."""


class EscapeError(WelanderError):
    """A return-map evaluation never returned to the switching line."""


class NoCrossingError(WelanderError):
    """An orbit does not reach the requested switching-zone boundary."""


class MeshLimitError(ConvergenceError):
    """The collocation mesh limit was reached before the tolerance was met."""

    def __init__(self, message, params=None):
        super().__init__(message)
        self.params = params


class TooFewCyclesError(WelanderError):
    """A trajectory window contains fewer than two full oscillation cycles."""


class ConfigError(WelanderError):
    """A configuration file could not be parsed or contains unknown keys."""
