"""Exception types raised across the package."""


class OupopError(Exception):
    """Base class for all package errors."""


class ParameterError(OupopError, ValueError):
    """A model or process parameter violates its constraints."""


class GridError(OupopError, ValueError):
    """A time grid is empty, non-increasing, or otherwise unusable."""


class PathRangeError(OupopError, ValueError):
    """A query time falls outside the span of a sample path."""


class CoverageError(OupopError, ValueError):
    """A noise path does not cover the requested integration window."""


class BlowUpError(OupopError, RuntimeError):
    """The integrated state left the finite range.

    Attributes:
        time: grid time at which the state first became non-finite or
            exceeded the magnitude cap.
    """

    def __init__(self, message, time):
        super().__init__(message)
        self.time = time


class CalibrationError(OupopError, RuntimeError):
    """The mean-reversion search hit its cap without confining the parameter.

    Attributes:
        best_envelope: tightest (lower, upper) envelope achieved over all
            attempted mean-reversion rates.
        beta_max: largest rate attempted.
    """

    def __init__(self, message, best_envelope, beta_max):
        super().__init__(message)
        self.best_envelope = best_envelope
        self.beta_max = beta_max


class InconsistentBoundsError(OupopError, ValueError):
    """Computed region bounds are empty (lower exceeds upper)."""


class SingularMeasurementError(OupopError, ValueError):
    """A measurement sits on or outside the observable range (0, 1)."""


class NonMeanRevertingError(OupopError, RuntimeError):
    """The regression slope is outside (0, 1); no mean-reverting fit exists."""


class SeriesFormatError(OupopError, ValueError):
    """A CSV series file is malformed.

    Attributes:
        line_no: 1-based line number of the offending row, when known.
    """

    def __init__(self, message, line_no=None):
        super().__init__(message)
        self.line_no = line_no
