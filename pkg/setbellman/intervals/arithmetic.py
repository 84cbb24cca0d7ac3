"""Interval arithmetic on scalars, vectors and matrices.

Only the operations the set-based Bellman operator needs are defined: non-negative
scaling, addition and the pointwise minimum. Endpoints are plain doubles (no outward
rounding); degenerate intervals (lo == hi) are singleton sets.

Usage:
    from setbellman.intervals import Interval, interval_min

    interval_min(Interval(0, 3), Interval(1, 2))  # Interval(lo=0.0, hi=2.0)
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from setbellman.common.exceptions import (
    DimensionMismatchError,
    IntervalInversionError,
    InvalidParameterError,
)


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Interval:
    """Closed real interval [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InvalidParameterError(
                "Interval endpoints must be finite", context={"lo": lo, "hi": hi}
            )
        if lo > hi:
            raise IntervalInversionError("Interval has lo > hi", context={"lo": lo, "hi": hi})
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: float) -> Interval:
        return cls(x, x)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol


def interval_scale(alpha: float, x: Interval) -> Interval:
    """Scale an interval by a non-negative scalar: α[a, b] = [αa, αb].

    Raises:
        InvalidParameterError: If alpha < 0 (scaling is only defined for α ≥ 0).
    """
    if alpha < 0:
        raise InvalidParameterError(
            "Interval scaling requires a non-negative factor", context={"alpha": alpha}
        )
    return Interval(alpha * x.lo, alpha * x.hi)


def interval_add(x: Interval, y: Interval) -> Interval:
    """[a, b] + [c, d] = [a + c, b + d]."""
    return Interval(x.lo + y.lo, x.hi + y.hi)


def interval_min(x: Interval, y: Interval) -> Interval:
    """Smallest interval containing min(u, v) for all u ∈ x, v ∈ y."""
    return Interval(min(x.lo, y.lo), min(x.hi, y.hi))


@dataclass(frozen=True, eq=False)
class IntervalVector:
    """Axis-aligned box [lo, hi] ⊂ ℝⁿ, stored as two read-only endpoint vectors."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self) -> None:
        lo, hi = _frozen(self.lo), _frozen(self.hi)
        if lo.ndim != 1 or lo.shape != hi.shape:
            raise DimensionMismatchError(
                "IntervalVector endpoints must be 1-D arrays of equal length",
                context={"lo_shape": list(lo.shape), "hi_shape": list(hi.shape)},
            )
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise InvalidParameterError("IntervalVector endpoints must be finite")
        bad = np.flatnonzero(lo > hi)
        if bad.size:
            raise IntervalInversionError(
                "IntervalVector has lo > hi", context={"indices": bad.tolist()}
            )
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def degenerate(cls, v) -> IntervalVector:
        """The singleton box {v}."""
        return cls(v, v)

    @classmethod
    def hull(cls, points) -> IntervalVector:
        """Smallest box containing every row of `points`."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return cls(pts.min(axis=0), pts.max(axis=0))

    @classmethod
    def from_intervals(cls, intervals: Iterable[Interval]) -> IntervalVector:
        items = list(intervals)
        return cls([i.lo for i in items], [i.hi for i in items])

    def __len__(self) -> int:
        return self.lo.shape[0]

    def __getitem__(self, i: int) -> Interval:
        return Interval(self.lo[i], self.hi[i])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntervalVector):
            return NotImplemented
        return np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi)

    __hash__ = None

    @property
    def width(self) -> np.ndarray:
        return self.hi - self.lo

    @property
    def midpoint(self) -> np.ndarray:
        return (self.lo + self.hi) / 2.0

    @property
    def is_degenerate(self) -> bool:
        return bool(np.array_equal(self.lo, self.hi))

    def contains(self, v, tol: float = 0.0) -> bool:
        """Whether the point `v` lies in the box, allowing `tol` slack on each side."""
        v = np.asarray(v, dtype=float)
        if v.shape != self.lo.shape:
            raise DimensionMismatchError(
                "Point and box dimensions differ",
                context={"point": list(v.shape), "box": list(self.lo.shape)},
            )
        return bool(np.all(v >= self.lo - tol) and np.all(v <= self.hi + tol))

    def contains_box(self, other: IntervalVector, tol: float = 0.0) -> bool:
        """Componentwise interval containment other ⊆ self."""
        return bool(np.all(other.lo >= self.lo - tol) and np.all(other.hi <= self.hi + tol))

    def scale(self, alpha: float) -> IntervalVector:
        if alpha < 0:
            raise InvalidParameterError(
                "Interval scaling requires a non-negative factor", context={"alpha": alpha}
            )
        return IntervalVector(alpha * self.lo, alpha * self.hi)

    def __add__(self, other: IntervalVector) -> IntervalVector:
        return IntervalVector(self.lo + other.lo, self.hi + other.hi)

    def to_dict(self) -> dict:
        return {"lo": self.lo.tolist(), "hi": self.hi.tolist()}


@dataclass(frozen=True, eq=False)
class IntervalMatrix:
    """Entrywise interval matrix [lo, hi] ⊂ ℝ^{m×n} (cost boxes live here)."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self) -> None:
        lo, hi = _frozen(self.lo), _frozen(self.hi)
        if lo.ndim != 2 or lo.shape != hi.shape:
            raise DimensionMismatchError(
                "IntervalMatrix endpoints must be 2-D arrays of equal shape",
                context={"lo_shape": list(lo.shape), "hi_shape": list(hi.shape)},
            )
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise InvalidParameterError("IntervalMatrix endpoints must be finite")
        bad = np.argwhere(lo > hi)
        if bad.size:
            raise IntervalInversionError(
                "IntervalMatrix has lo > hi", context={"entries": bad.tolist()}
            )
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def degenerate(cls, m) -> IntervalMatrix:
        return cls(m, m)

    @property
    def shape(self) -> tuple[int, int]:
        return self.lo.shape

    @property
    def is_degenerate(self) -> bool:
        return bool(np.array_equal(self.lo, self.hi))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntervalMatrix):
            return NotImplemented
        return np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi)

    __hash__ = None

    def contains(self, m, tol: float = 0.0) -> bool:
        m = np.asarray(m, dtype=float)
        if m.shape != self.lo.shape:
            raise DimensionMismatchError(
                "Matrix and box shapes differ",
                context={"matrix": list(m.shape), "box": list(self.lo.shape)},
            )
        return bool(np.all(m >= self.lo - tol) and np.all(m <= self.hi + tol))

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        """Draw one matrix uniformly from the box."""
        return self.lo + rng.random(self.lo.shape) * (self.hi - self.lo)

    def vertices(self) -> tuple[np.ndarray, np.ndarray]:
        """The two endpoint matrices (lo, hi)."""
        return self.lo, self.hi

    def to_dict(self) -> dict:
        return {"lo": self.lo.tolist(), "hi": self.hi.tolist()}
