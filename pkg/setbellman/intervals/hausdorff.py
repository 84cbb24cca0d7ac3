"""Hausdorff distances under the ∞-norm.

For axis-aligned boxes the distance reduces to the larger of the two endpoint-vector
distances; for finite point sets it is computed exactly from the Chebyshev distance
matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from setbellman.common.exceptions import DimensionMismatchError, InvalidParameterError
from setbellman.intervals.arithmetic import IntervalVector


@dataclass(frozen=True, eq=False)
class PointSet:
    """Finite, non-empty set of points in ℝⁿ, one point per row."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1) if pts.size else pts.reshape(0, 1)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise InvalidParameterError(
                "PointSet must be a non-empty 2-D array", context={"shape": list(pts.shape)}
            )
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def unique(self, decimals: int = 9) -> PointSet:
        """Points deduplicated after rounding to `decimals`."""
        return PointSet(np.unique(np.round(self.points, decimals), axis=0))


def _check_same_dim(x: IntervalVector, y: IntervalVector) -> None:
    if len(x) != len(y):
        raise DimensionMismatchError(
            "Boxes have different dimensions", context={"x": len(x), "y": len(y)}
        )


def hausdorff_interval(x: IntervalVector, y: IntervalVector) -> float:
    """Hausdorff distance between two boxes: max(‖x̲ − y̲‖∞, ‖x̄ − ȳ‖∞)."""
    _check_same_dim(x, y)
    if len(x) == 0:
        return 0.0
    return float(max(np.max(np.abs(x.lo - y.lo)), np.max(np.abs(x.hi - y.hi))))


def hausdorff_point_set(a: PointSet, b: PointSet) -> float:
    """Exact Hausdorff distance between two finite point sets under the ∞-norm."""
    if a.dim != b.dim:
        raise DimensionMismatchError(
            "Point sets have different dimensions", context={"a": a.dim, "b": b.dim}
        )
    d = cdist(a.points, b.points, metric="chebyshev")
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def point_to_box_distance(v, x: IntervalVector) -> float:
    """inf over w in the box of ‖v − w‖∞; zero when v lies inside."""
    v = np.asarray(v, dtype=float)
    if v.shape != x.lo.shape:
        raise DimensionMismatchError(
            "Point and box dimensions differ",
            context={"point": list(v.shape), "box": list(x.lo.shape)},
        )
    if v.size == 0:
        return 0.0
    excess = np.maximum(x.lo - v, 0.0) + np.maximum(v - x.hi, 0.0)
    return float(excess.max())
