"""Exception types shared across the package."""


class DigitFreqError(Exception):
    """Base class for all errors raised by this package."""


class PrecisionExhausted(DigitFreqError):
    """An exact sign or comparison could not be certified within the bit budget."""


class InsufficientDigits(DigitFreqError):
    """A digit stream ended before the requested computation could be certified."""


class RootIsolationError(DigitFreqError, ValueError):
    """Root counting over an interval did not match what the caller required."""


class FaceError(DigitFreqError, ValueError):
    """A simplex operation was applied to a point on the degenerate face."""


class NotMaximalInput(DigitFreqError, ValueError):
    """A digit sequence that must start with the top digit does not."""


class NotMarkovError(DigitFreqError, ValueError):
    """The orbit data supplied does not describe a Markov partition."""
