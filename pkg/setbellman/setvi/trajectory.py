"""Value-function trajectories under time-varying sampled costs.

V^{k+1} = f_{C^k}(V^k) with C^k drawn from a sampler. Alongside, the interval iterate
𝒱^{k+1} = F(𝒱^k) is advanced from the degenerate box {V^0}; cost and value monotonicity
of the Bellman operator keep every V^k inside 𝒱^k.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from setbellman.common.config import get_settings
from setbellman.common.exceptions import InvalidParameterError
from setbellman.common.logging import get_logger
from setbellman.common.metrics import CONTAINMENT_VIOLATIONS_TOTAL
from setbellman.common.rng import make_rng
from setbellman.intervals.arithmetic import IntervalVector
from setbellman.intervals.hausdorff import point_to_box_distance
from setbellman.mdp.bellman import bellman_apply
from setbellman.mdp.model import as_value_function
from setbellman.setvi.operator import IntervalMdp, fixed_point_box, set_bellman_apply
from setbellman.setvi.sampling import CostSampler, UniformBoxSampler

logger = get_logger("SETVI")


@dataclass
class TrajectoryRecord:
    """Per-iteration values, interval iterates and distances to the fixed-point box.

    Index k = 0 holds the initial value and the degenerate box at it.
    """

    fixed_box: IntervalVector
    values: list[np.ndarray] = field(default_factory=list)
    boxes: list[IntervalVector] = field(default_factory=list)
    distances: list[float] = field(default_factory=list)
    costs: list[np.ndarray] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.values)

    def append(self, v: np.ndarray, box: IntervalVector) -> None:
        self.values.append(v)
        self.boxes.append(box)
        self.distances.append(point_to_box_distance(v, self.fixed_box))

    def contained(self, tol: float | None = None) -> list[bool]:
        """Per-iteration flag V^k ∈ 𝒱^k."""
        tol = get_settings().containment_tol if tol is None else tol
        return [box.contains(v, tol) for v, box in zip(self.values, self.boxes, strict=True)]

    def tail_distance(self, fraction: float | None = None) -> float:
        """Max distance to the fixed-point box over the last `fraction` of iterations."""
        fraction = get_settings().tail_fraction if fraction is None else fraction
        n = max(1, int(np.ceil(len(self.distances) * fraction)))
        return float(max(self.distances[-n:]))

    def rows(self) -> list[dict]:
        """Long-format rows: one per (step, state)."""
        out = []
        for k, (v, box, dist) in enumerate(
            zip(self.values, self.boxes, self.distances, strict=True)
        ):
            for s in range(v.shape[0]):
                out.append(
                    {
                        "step": k,
                        "state": s,
                        "value": float(v[s]),
                        "box_lo": float(box.lo[s]),
                        "box_hi": float(box.hi[s]),
                        "dist_to_fixed_box": dist,
                    }
                )
        return out


def random_cost_trajectory(
    imdp: IntervalMdp,
    v0,
    num_steps: int,
    seed: int | None,
    sampler: CostSampler | None = None,
    fixed_box: IntervalVector | None = None,
    epsilon: float | None = None,
) -> TrajectoryRecord:
    """Run V^{k+1} = f_{C^k}(V^k) with sampled costs, tracking the interval iterate.

    Args:
        imdp: The MDP family; its cost box drives the interval iterate.
        v0: Initial value function (also the degenerate initial box).
        num_steps: Number of updates (the record holds num_steps + 1 points).
        seed: Seed for the cost sampler.
        sampler: Cost sampler; uniform over the box by default.
        fixed_box: Precomputed fixed-point box; computed with `epsilon` when omitted.
        epsilon: Accuracy used for the fixed-point box.
    """
    if num_steps < 1:
        raise InvalidParameterError("num_steps must be >= 1", context={"num_steps": num_steps})
    sampler = sampler or UniformBoxSampler(imdp.cost_box)
    if fixed_box is None:
        fixed_box = fixed_point_box(imdp, epsilon)
    rng = make_rng(seed)

    v = as_value_function(v0, imdp.num_states)
    box = IntervalVector.degenerate(v)
    record = TrajectoryRecord(fixed_box=fixed_box)
    record.append(v, box)
    for _ in range(num_steps):
        cost = sampler(rng)
        v = bellman_apply(imdp.mdp_at(cost), v)
        box = set_bellman_apply(imdp, box)
        record.costs.append(cost)
        record.append(v, box)

    flags = record.contained()
    violations = flags.count(False)
    if violations:
        CONTAINMENT_VIOLATIONS_TOTAL.inc(violations)
        logger.warning(
            "Trajectory left its interval iterate",
            extra={"data": {"violations": violations, "first": flags.index(False)}},
        )
    logger.debug(
        "Random cost trajectory finished",
        extra={
            "data": {
                "steps": num_steps,
                "sampler": sampler.kind,
                "seed": seed,
                "tail_distance": record.tail_distance(),
            }
        },
    )
    return record
