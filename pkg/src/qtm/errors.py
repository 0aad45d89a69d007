"""Exception hierarchy shared by every qtm module."""


class QTMError(Exception):
    """Base class for all errors raised by qtm."""


class DomainError(QTMError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class SchemaError(QTMError, ValueError):
    """Malformed JSON input (parameters, sweep specs, serialized matrices)."""


class UnsupportedStatisticsError(DomainError):
    """A closed form was requested for bath/subsystem statistics it does not cover."""


class SingularDenominatorError(DomainError):
    """A closed-form denominator vanishes (divergent current)."""


class UndefinedContrastError(DomainError):
    """Forward and swapped currents coincide, so the contrast is 0/0."""


class NoPeakSplitError(QTMError):
    """The global conductance shows fewer than two local maxima."""


class NumericalError(QTMError):
    """Base class for failures of the first-principles engine."""


class DegenerateSteadyStateError(NumericalError):
    """The Liouvillian null space has dimension larger than one."""

    def __init__(self, nullity: int, message: str | None = None):
        self.nullity = nullity
        super().__init__(message or f"steady state is not unique: null-space dimension {nullity}")


class ConvergenceError(NumericalError):
    """An iterative procedure did not reach its tolerance within its budget."""


class StationarityError(NumericalError):
    """A density matrix fails the steady-state heat balance Q_L + Q_R = 0."""


class TruncationError(NumericalError):
    """An oscillator truncation keeps too much thermal weight above the cutoff."""


class DimensionCapError(NumericalError):
    """The vectorized Hilbert-space dimension exceeds the configured cap."""
