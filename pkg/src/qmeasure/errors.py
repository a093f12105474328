"""Exception types raised by qmeasure."""


class QMeasureError(ValueError):
    """Base class for all input and numeric errors in this package."""


class NormalizationError(QMeasureError):
    """A state vector does not have unit norm."""


class DimensionMismatchError(QMeasureError):
    """Two objects live in Hilbert spaces of different dimension."""


class HermiticityError(QMeasureError):
    """A matrix expected to be Hermitian is not."""


class TraceError(QMeasureError):
    """A density matrix does not have unit trace."""


class PositivityError(QMeasureError):
    """A density matrix has an eigenvalue below the positivity tolerance."""


class DomainError(QMeasureError):
    """A scalar argument lies outside its admissible range."""


class EmptySetError(QMeasureError):
    """An operation requiring at least one state received none."""


class StateSetParseError(QMeasureError):
    """A state-set document is not well-formed."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class StateValidationError(QMeasureError):
    """A state in a state-set document fails validation."""

    def __init__(self, message, index=None):
        if index is not None:
            message = f"state {index}: {message}"
        super().__init__(message)
        self.index = index
