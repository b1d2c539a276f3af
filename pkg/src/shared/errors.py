"""
Exception hierarchy shared by every module.

Each class corresponds to one failure mode an operation can report.
Most derive from ValueError so callers that only care about "bad input"
can catch the builtin.
"""


class EdgeSimError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParamsError(EdgeSimError, ValueError):
    """A model parameter violates its domain constraint."""


class DegenerateModelError(InvalidParamsError):
    """The model is well-formed but the requested quantity is undefined (e.g. h0 = 0)."""


class InvalidTimeError(EdgeSimError, ValueError):
    """A time argument is negative or non-finite."""


class InvalidStepError(EdgeSimError, ValueError):
    """An integration step is non-positive or longer than the horizon."""


class EmptyGridError(EdgeSimError, ValueError):
    """A sweep grid has no entries."""


class InvalidPopulationError(EdgeSimError, ValueError):
    """A population count is negative or not an integer."""


class UnknownTrafficClassError(EdgeSimError, LookupError):
    """The classification policy has no entry for a traffic class."""


class InvalidTransitionError(EdgeSimError):
    """A content item was moved to a status its lifecycle does not allow."""


class ClockRegressionError(EdgeSimError):
    """An event is older than the state it is applied to."""


class ConfigError(EdgeSimError, ValueError):
    """
    A scenario configuration could not be parsed or validated.

    Carries every problem found, not just the first one.
    """

    def __init__(self, issues: list):
        self.issues = list(issues)
        lines = [str(issue) for issue in self.issues]
        super().__init__("invalid configuration:\n  " + "\n  ".join(lines))


class BufferOverflowError(EdgeSimError):
    """An item was pushed into an edge buffer without room for it."""
