"""Stochastic-game-specific exceptions."""

from __future__ import annotations

from setbellman.common.exceptions import SetBellmanError


class OpponentStrategyError(SetBellmanError):
    """The opponent's response function failed mid-trajectory.

    Attributes:
        trajectory: Everything recorded up to (not including) the failing iteration.
    """

    def __init__(self, message: str, context: dict | None = None, trajectory=None) -> None:
        super().__init__(message, context)
        self.trajectory = trajectory
