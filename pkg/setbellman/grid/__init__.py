"""Grid-world MDP and game generators."""

from setbellman.grid.generator import (
    ACTIONS,
    NUM_ACTIONS,
    GridSpec,
    build_grid_kernel,
    grid_game,
    grid_mdp,
    neighbors,
    sample_cost_matrices,
    target,
)

__all__ = [
    "ACTIONS",
    "NUM_ACTIONS",
    "GridSpec",
    "build_grid_kernel",
    "grid_game",
    "grid_mdp",
    "neighbors",
    "sample_cost_matrices",
    "target",
]
