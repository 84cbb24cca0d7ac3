"""Interval set-based Bellman operator, set value iteration and containment machinery."""

from setbellman.setvi.operator import (
    IntervalMdp,
    SetVISolution,
    fixed_point_box,
    inflate,
    set_bellman_apply,
    set_value_iteration,
)
from setbellman.setvi.sampling import make_sampler, sampled_fixed_points
from setbellman.setvi.trajectory import TrajectoryRecord, random_cost_trajectory

__all__ = [
    "IntervalMdp",
    "SetVISolution",
    "TrajectoryRecord",
    "fixed_point_box",
    "inflate",
    "make_sampler",
    "random_cost_trajectory",
    "sampled_fixed_points",
    "set_bellman_apply",
    "set_value_iteration",
]
