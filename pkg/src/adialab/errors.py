"""
Exceptions raised by adialab.

Parameter problems subclass ValueError so callers that only know about
ValueError keep working. Numerical failures carry enough context to be
reported by the experiment runner without re-running anything.
"""

from typing import Optional


class AdialabError(Exception):
    """Base class for every error raised by the laboratory."""


class ParameterError(AdialabError, ValueError):
    """An argument violates an operation's precondition."""


class ConfigError(ParameterError):
    """An experiment configuration is invalid.

    `field` names the offending configuration key so the CLI can point at it.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class MatrixValidationError(ParameterError):
    """A Sol-manifold gluing matrix fails det A = 1 or |tr A| > 2."""

    def __init__(self, condition: str, message: str):
        super().__init__(message)
        self.condition = condition


class ConvergenceError(AdialabError):
    """A numerical procedure stopped before meeting its tolerance.

    `estimates` holds the last two estimates that were compared, when known.
    """

    def __init__(
        self,
        operation: str,
        message: str,
        estimates: Optional[tuple[float, float]] = None,
    ):
        super().__init__(f"{operation}: {message}")
        self.operation = operation
        self.estimates = estimates


class TruncationError(ConvergenceError):
    """A series or lattice sum could not be truncated below its tail tolerance."""


class TruncationSensitivityError(ConvergenceError):
    """Eigenvalues moved when the truncation interval was enlarged."""


class LatticeBudgetError(AdialabError):
    """An enumeration would visit more lattice points than the configured budget."""

    def __init__(self, predicted: float, budget: int):
        super().__init__(
            f"predicted lattice size {predicted:.3g} exceeds the budget of {budget} points"
        )
        self.predicted = predicted
        self.budget = budget
