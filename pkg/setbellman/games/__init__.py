"""Single-controller two-player stochastic games and two-player value iteration."""

from setbellman.games.exceptions import OpponentStrategyError
from setbellman.games.game import (
    SingleControllerGame,
    interval_over_approx,
    player_one_cost,
    player_one_kernel,
    player_one_mdp,
    player_two_cost,
    player_two_kernel,
    player_two_mdp,
)
from setbellman.games.opponents import (
    FixedOpponent,
    OpponentStrategy,
    UniformRandomOpponent,
    ValueIterationOpponent,
    fixed,
    max_vi,
    min_vi,
    uniform_random,
)
from setbellman.games.simulation import (
    ContainmentReport,
    GameTrajectory,
    LimitCycleReport,
    NashContainmentResult,
    containment_report,
    game_interval_mdp,
    limit_cycle_detected,
    nash_containment_check,
    two_player_vi,
)

__all__ = [
    "ContainmentReport",
    "FixedOpponent",
    "GameTrajectory",
    "LimitCycleReport",
    "NashContainmentResult",
    "OpponentStrategy",
    "OpponentStrategyError",
    "SingleControllerGame",
    "UniformRandomOpponent",
    "ValueIterationOpponent",
    "containment_report",
    "fixed",
    "game_interval_mdp",
    "interval_over_approx",
    "limit_cycle_detected",
    "max_vi",
    "min_vi",
    "nash_containment_check",
    "player_one_cost",
    "player_one_kernel",
    "player_one_mdp",
    "player_two_cost",
    "player_two_kernel",
    "player_two_mdp",
    "two_player_vi",
    "uniform_random",
]
