"""Interval arithmetic and Hausdorff distances on interval boxes and finite point sets."""

from setbellman.intervals.arithmetic import (
    Interval,
    IntervalMatrix,
    IntervalVector,
    interval_add,
    interval_min,
    interval_scale,
)
from setbellman.intervals.hausdorff import (
    PointSet,
    hausdorff_interval,
    hausdorff_point_set,
    point_to_box_distance,
)

__all__ = [
    "Interval",
    "IntervalMatrix",
    "IntervalVector",
    "PointSet",
    "hausdorff_interval",
    "hausdorff_point_set",
    "interval_add",
    "interval_min",
    "interval_scale",
    "point_to_box_distance",
]
