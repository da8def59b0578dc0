"""Exception hierarchy shared across the package."""


class SQPTError(Exception):
    """Base class for every error raised by sqptlab."""


class ArgumentError(SQPTError, ValueError):
    """Bad shape, dimension, index or parameter."""


class RepresentationError(SQPTError):
    """A matrix cannot be interpreted as the requested channel representation."""


class FrameError(SQPTError):
    """Operator set is not linearly independent (or numerically too close to it)."""

    def __init__(self, message, condition_number=None):
        super().__init__(message)
        self.condition_number = condition_number


class PovmError(SQPTError):
    """Elements do not form a POVM within tolerance."""

    def __init__(self, message, deviation=None):
        super().__init__(message)
        self.deviation = deviation


class SolveError(SQPTError):
    """Linear inversion is ill-conditioned."""

    def __init__(self, message, condition_number=None):
        super().__init__(message)
        self.condition_number = condition_number


class ConsistencyError(SQPTError):
    """Two reconstruction routes that should agree do not."""

    def __init__(self, message, discrepancy=None):
        super().__init__(message)
        self.discrepancy = discrepancy


class SearchError(SQPTError):
    """SIC fiducial search did not converge."""

    def __init__(self, message, report=None, best=None):
        super().__init__(message)
        self.report = report
        self.best = best


class NumericError(SQPTError):
    """Probabilities or other derived quantities are out of their valid range."""


class ParseError(SQPTError, ValueError):
    """Malformed report or configuration file."""
