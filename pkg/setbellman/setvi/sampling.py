"""Cost samplers and sampled fixed points of a cost-uncertain MDP family.

A sampler draws one cost matrix per call from the family's cost set:

- ``uniform-box``: uniform over the cost box.
- ``finite-list``: uniform over an explicit list of cost matrices.
- ``vertex``: one of the two endpoint matrices C̲ or C̄, with equal probability.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Literal, Protocol

import numpy as np

from setbellman.common.config import get_settings
from setbellman.common.exceptions import ConvergenceError, InvalidParameterError, check_shape
from setbellman.common.logging import get_logger
from setbellman.common.rng import make_rng
from setbellman.intervals.arithmetic import IntervalMatrix
from setbellman.intervals.hausdorff import PointSet
from setbellman.mdp.bellman import value_iteration
from setbellman.mdp.model import Mdp
from setbellman.setvi.operator import IntervalMdp

logger = get_logger("SETVI")

SamplerKind = Literal["uniform-box", "finite-list", "vertex"]


class CostSampler(Protocol):
    """Draws one S×A cost matrix per call."""

    kind: str

    def __call__(self, rng: np.random.Generator) -> np.ndarray: ...


class UniformBoxSampler:
    kind = "uniform-box"

    def __init__(self, box: IntervalMatrix) -> None:
        self.box = box

    def __call__(self, rng: np.random.Generator) -> np.ndarray:
        return self.box.sample(rng)


class FiniteListSampler:
    kind = "finite-list"

    def __init__(self, costs) -> None:
        self.costs = [np.asarray(c, dtype=float) for c in costs]
        if not self.costs:
            raise InvalidParameterError("finite-list sampler needs at least one cost matrix")

    def __call__(self, rng: np.random.Generator) -> np.ndarray:
        return self.costs[int(rng.integers(len(self.costs)))]


class VertexSampler:
    kind = "vertex"

    def __init__(self, box: IntervalMatrix) -> None:
        self.box = box

    def __call__(self, rng: np.random.Generator) -> np.ndarray:
        return self.box.hi if rng.random() < 0.5 else self.box.lo


def make_sampler(kind: SamplerKind, imdp: IntervalMdp, costs=None) -> CostSampler:
    """Build a sampler by name; ``finite-list`` requires `costs`, each inside the box."""
    if kind == "uniform-box":
        return UniformBoxSampler(imdp.cost_box)
    if kind == "vertex":
        return VertexSampler(imdp.cost_box)
    if kind == "finite-list":
        if costs is None:
            raise InvalidParameterError("finite-list sampler needs an explicit cost list")
        for i, c in enumerate(costs):
            check_shape(f"costs[{i}]", np.asarray(c), imdp.cost_box.shape)
            if not imdp.cost_box.contains(c):
                raise InvalidParameterError(
                    "Listed cost lies outside the cost box", context={"index": i}
                )
        return FiniteListSampler(costs)
    raise InvalidParameterError("Unknown sampler kind", context={"kind": kind})


def _solve_fixed_point(args: tuple[Mdp, float]) -> np.ndarray:
    mdp, epsilon = args
    result = value_iteration(mdp, np.zeros(mdp.num_states), epsilon=epsilon)
    if not result.converged:
        raise ConvergenceError(
            "Sampled fixed point did not converge", context={"iterations": result.iterations}
        )
    return result.values


def sampled_fixed_points(
    imdp: IntervalMdp,
    num_samples: int,
    seed: int | None,
    epsilon: float | None = None,
    costs=None,
    workers: int = 1,
) -> PointSet:
    """Optimal value functions of sampled members of the MDP family.

    Without `costs`, the two endpoint costs come first, followed by `num_samples` uniform
    draws from the box. With an explicit `costs` list, exactly the listed matrices are solved,
    in order; the hull endpoints are not members of the list unless it names them.

    Args:
        imdp: The MDP family.
        num_samples: Number of uniform draws from the cost box (ignored with `costs`).
        seed: Seed for the uniform draws.
        epsilon: Accuracy of each value iteration.
        costs: Optional explicit list of cost matrices.
        workers: Process count; results are ordered by sample index regardless.
    """
    epsilon = get_settings().default_epsilon if epsilon is None else epsilon
    if costs is None:
        if num_samples < 1:
            raise InvalidParameterError(
                "num_samples must be >= 1", context={"num_samples": num_samples}
            )
        rng = make_rng(seed)
        drawn = [imdp.cost_box.sample(rng) for _ in range(num_samples)]
        all_costs = [imdp.cost_box.lo, imdp.cost_box.hi, *drawn]
    else:
        all_costs = list(make_sampler("finite-list", imdp, costs).costs)

    jobs = [(imdp.mdp_at(c), epsilon) for c in all_costs]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            points = list(ex.map(_solve_fixed_point, jobs))
    else:
        points = [_solve_fixed_point(job) for job in jobs]

    logger.info(
        "Sampled fixed points computed",
        extra={"data": {"count": len(points), "seed": seed, "explicit": costs is not None}},
    )
    return PointSet(np.stack(points))
