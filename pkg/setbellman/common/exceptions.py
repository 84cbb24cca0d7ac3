"""Custom exceptions for setbellman.

All modules raise these instead of generic ones. The CLI maps them to exit codes
(validation failures → 2, everything else → 1).
"""

from __future__ import annotations


class SetBellmanError(Exception):
    """Base exception for all setbellman errors.

    Args:
        message: Human-readable error description.
        context: Optional dict of structured data for logging/debugging.
    """

    def __init__(self, message: str, context: dict | None = None) -> None:
        super().__init__(message)
        self.context = context or {}

    def __str__(self) -> str:
        if self.context:
            return f"{super().__str__()} | context={self.context}"
        return super().__str__()


class SpecValidationError(SetBellmanError):
    """Input spec is malformed or violates a model invariant."""


class DimensionMismatchError(SpecValidationError):
    """Array shapes do not agree with the model dimensions."""


class IntervalInversionError(SpecValidationError):
    """An interval has lo > hi somewhere."""


class InvalidParameterError(SpecValidationError):
    """A scalar parameter is out of its admissible range (epsilon, discount, alpha, ...)."""


class ConvergenceError(SetBellmanError):
    """An iterative solver hit its iteration cap before certifying convergence."""


class SolverError(SetBellmanError):
    """A numerical routine (linear solve) failed."""


def check_shape(name: str, array, expected: tuple[int, ...]) -> None:
    """Raise DimensionMismatchError unless `array.shape == expected`."""
    if tuple(array.shape) != tuple(expected):
        raise DimensionMismatchError(
            f"{name} has shape {tuple(array.shape)}, expected {tuple(expected)}",
            context={"field": name, "shape": list(array.shape), "expected": list(expected)},
        )
