"""Exception types shared across the package."""


class QuditSimError(Exception):
    """Base class for all errors raised by this package."""


class NotInvertibleError(QuditSimError):
    """A modular inverse does not exist, or a circuit has no inverse."""


class UnsolvableError(QuditSimError):
    """A linear congruence has no solution."""


class DimensionMismatchError(QuditSimError):
    """Operands have incompatible qudit count or dimension."""


class InvalidDimensionError(QuditSimError):
    """Qudit dimension is out of the supported range."""


class CompositeDimensionError(QuditSimError):
    """Operation requires a prime qudit dimension."""


class NotFullTableauError(QuditSimError):
    """Operation requires a tableau that tracks destabilizers."""


class InvalidTableauError(QuditSimError):
    """Tableau does not describe a valid stabilizer state."""


class InconsistentSystemError(QuditSimError):
    """Constraint system derived from a tableau has no solution."""


class TooLargeError(QuditSimError):
    """Dense representation would exceed the configured cutoff."""


class IndexOutOfRangeError(QuditSimError):
    """Qudit or operation index out of range."""


class ControlEqualsTargetError(QuditSimError):
    """Two-qudit gate addressed with identical control and target."""


class InvalidProbabilityError(QuditSimError):
    """Probability outside [0, 1] or weights that do not normalize."""


class NoMeasurementError(QuditSimError):
    """Circuit has no measurement where one is required."""


class ParseError(QuditSimError):
    """Circuit text could not be parsed.

    Carries the 1-based line number of the offending line.
    """

    def __init__(self, line_no, reason):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")
