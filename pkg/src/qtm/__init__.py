"""Heat transport through coupled quantum subsystems between two thermal baths.

Two engines are provided: closed-form expressions (``analytic_local``,
``analytic_global``) and a Lindblad steady-state solver (``numerics``) that
checks them.
"""

from .errors import (ConvergenceError, DegenerateSteadyStateError, DimensionCapError,
                     DomainError, NoPeakSplitError, NumericalError, QTMError, SchemaError,
                     SingularDenominatorError, StationarityError, TruncationError,
                     UndefinedContrastError, UnsupportedStatisticsError)
from .model import BOSON, FERMION, ModelParams, RateSet, Statistics, occupation, rates

__version__ = "0.1.0"

__all__ = [
    "BOSON", "FERMION", "ModelParams", "RateSet", "Statistics", "occupation", "rates",
    "QTMError", "DomainError", "SchemaError", "UnsupportedStatisticsError",
    "SingularDenominatorError", "UndefinedContrastError", "NoPeakSplitError",
    "NumericalError", "DegenerateSteadyStateError", "ConvergenceError",
    "StationarityError", "TruncationError", "DimensionCapError",
]
