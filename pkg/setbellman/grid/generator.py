"""Grid-world MDP family with 4-connected moves.

States are grid cells in row-major order; actions are [left, right, up, down]. An action
is feasible when its target cell is on the grid. A feasible action reaches its target
with probability `stick_prob` and slips uniformly to the other neighbors; an infeasible
action moves uniformly over all neighbors. There is no self-loop mass.

Usage:
    spec = GridSpec(rows=3, cols=3, stick_prob=0.7, seed=7)
    kernel = build_grid_kernel(spec)
    cost, coupling = sample_cost_matrices(spec, spec.num_states, NUM_ACTIONS)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from setbellman.common.exceptions import InvalidParameterError
from setbellman.common.logging import get_logger
from setbellman.common.rng import make_rng
from setbellman.games.game import CouplingForm, SingleControllerGame
from setbellman.mdp.model import Mdp, column_index

logger = get_logger("GRID")

ACTIONS = ("left", "right", "up", "down")
NUM_ACTIONS = len(ACTIONS)
_MOVES = ((0, -1), (0, 1), (-1, 0), (1, 0))


@dataclass(frozen=True)
class GridSpec:
    """Grid dimensions, target probability of a feasible move and the cost seed."""

    rows: int
    cols: int
    stick_prob: float = 0.7
    seed: int = 0

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1 or self.rows * self.cols < 2:
            raise InvalidParameterError(
                "Grid needs positive dimensions and at least two cells",
                context={"rows": self.rows, "cols": self.cols},
            )
        if not 0.0 < self.stick_prob <= 1.0:
            raise InvalidParameterError(
                "stick_prob must lie in (0, 1]", context={"stick_prob": self.stick_prob}
            )

    @property
    def num_states(self) -> int:
        return self.rows * self.cols

    def state(self, row: int, col: int) -> int:
        return row * self.cols + col


def target(spec: GridSpec, s: int, a: int) -> int | None:
    """Cell reached by action `a` from `s`, or None when it leaves the grid."""
    row, col = divmod(s, spec.cols)
    dr, dc = _MOVES[a]
    r, c = row + dr, col + dc
    if 0 <= r < spec.rows and 0 <= c < spec.cols:
        return spec.state(r, c)
    return None


def neighbors(spec: GridSpec, s: int) -> list[int]:
    """4-connected neighbors of `s`, in action order."""
    return [t for a in range(NUM_ACTIONS) if (t := target(spec, s, a)) is not None]


def build_grid_kernel(spec: GridSpec) -> np.ndarray:
    """S×(S·4) column-stochastic kernel of the grid."""
    n = spec.num_states
    kernel = np.zeros((n, n * NUM_ACTIONS))
    for s in range(n):
        nbrs = neighbors(spec, s)
        for a in range(NUM_ACTIONS):
            col = column_index(s, a, NUM_ACTIONS)
            goal = target(spec, s, a)
            if goal is None:
                kernel[nbrs, col] = 1.0 / len(nbrs)
            elif len(nbrs) == 1:
                kernel[goal, col] = 1.0
            else:
                kernel[nbrs, col] = (1.0 - spec.stick_prob) / (len(nbrs) - 1)
                kernel[goal, col] = spec.stick_prob
    return kernel


def sample_cost_matrices(
    spec: GridSpec, num_states: int, num_actions: int
) -> tuple[np.ndarray, np.ndarray]:
    """Base cost C and coupling J, entries i.i.d. uniform on [0, 1] from `spec.seed`."""
    rng = make_rng(spec.seed)
    cost = rng.random((num_states, num_actions))
    coupling = rng.random((num_states, num_actions))
    return cost, coupling


def grid_mdp(spec: GridSpec, discount: float) -> Mdp:
    """Single-agent grid MDP with the sampled base cost."""
    cost, _ = sample_cost_matrices(spec, spec.num_states, NUM_ACTIONS)
    return Mdp(build_grid_kernel(spec), cost, discount)


def grid_game(
    spec: GridSpec,
    discount_p1: float,
    discount_p2: float,
    form: CouplingForm = "matching",
) -> SingleControllerGame:
    """Single-controller game on the grid with sampled C and J.

    Defaults to the matching coupling, whose player-one box [C, C + J] has its upper end
    attained when player two copies player one.
    """
    cost, coupling = sample_cost_matrices(spec, spec.num_states, NUM_ACTIONS)
    logger.debug(
        "Generated grid game",
        extra={"data": {"rows": spec.rows, "cols": spec.cols, "seed": spec.seed, "form": form}},
    )
    return SingleControllerGame.from_coupling(
        build_grid_kernel(spec), cost, coupling, discount_p1, discount_p2, form=form
    )
