"""Interval set-based Bellman operator and set-based value iteration.

For a cost box [C̲, C̄] and a value box [V̲, V̄], the image of the set-based operator is
again a box whose endpoints decouple: the lower endpoint only sees (C̲, V̲) and the upper
endpoint only sees (C̄, V̄).

Usage:
    from setbellman.setvi.operator import IntervalMdp, set_value_iteration

    imdp = IntervalMdp(kernel=[[1.0, 1.0]], cost_box=IntervalMatrix([[0, 1]], [[1, 2]]),
                       discount=0.9)
    solution = set_value_iteration(imdp, IntervalVector.degenerate([0.0]), epsilon=1e-6)
    solution.inflated  # guaranteed to contain the fixed-point box
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from setbellman.common.config import get_settings
from setbellman.common.exceptions import (
    ConvergenceError,
    InvalidParameterError,
    check_shape,
)
from setbellman.common.logging import get_logger
from setbellman.common.metrics import SOLVES_TOTAL, VALUE_ITERATIONS_TOTAL
from setbellman.intervals.arithmetic import IntervalMatrix, IntervalVector
from setbellman.intervals.hausdorff import hausdorff_interval
from setbellman.mdp.bellman import bellman_apply, value_iteration
from setbellman.mdp.model import Mdp, validate_mdp

logger = get_logger("SETVI")


@dataclass(frozen=True, eq=False)
class IntervalMdp:
    """Family of MDPs sharing kernel and discount, with costs ranging over a box."""

    kernel: np.ndarray
    cost_box: IntervalMatrix
    discount: float

    def __post_init__(self) -> None:
        # Building both endpoint MDPs validates shapes once.
        lower = Mdp(self.kernel, self.cost_box.lo, self.discount)
        object.__setattr__(self, "kernel", lower.kernel)
        object.__setattr__(self, "discount", lower.discount)
        object.__setattr__(self, "_lower", lower)
        object.__setattr__(self, "_upper", Mdp(lower.kernel, self.cost_box.hi, lower.discount))

    @classmethod
    def from_costs(cls, kernel, costs, discount: float) -> IntervalMdp:
        """Interval hull of a finite list of cost matrices."""
        stack = np.stack([np.asarray(c, dtype=float) for c in costs])
        return cls(kernel, IntervalMatrix(stack.min(axis=0), stack.max(axis=0)), discount)

    @property
    def num_states(self) -> int:
        return self.cost_box.shape[0]

    @property
    def num_actions(self) -> int:
        return self.cost_box.shape[1]

    @property
    def lower_mdp(self) -> Mdp:
        """The MDP at the lower cost endpoint C̲."""
        return self._lower

    @property
    def upper_mdp(self) -> Mdp:
        """The MDP at the upper cost endpoint C̄."""
        return self._upper

    def mdp_at(self, cost) -> Mdp:
        return self._lower.with_cost(cost)

    def validate(self) -> list[str]:
        """Kernel/discount violations, same report format as `validate_mdp`."""
        return validate_mdp(self._lower)


@dataclass(frozen=True)
class SetVISolution:
    """Outcome of set-based value iteration.

    Attributes:
        box: Last interval iterate 𝒱^k.
        inflated: `box` widened by certified_epsilon / 2; contains the fixed-point box
            whenever converged.
        iterations: Number of set-operator applications.
        certified_epsilon: ε such that d_H(box, 𝒱*) ≤ ε / 2. Equals the requested epsilon
            when converged, otherwise the a-posteriori bound from the last step.
        converged: Whether the stopping rule fired before max_iters.
        last_step: Hausdorff distance between the last two iterates.
    """

    box: IntervalVector
    inflated: IntervalVector
    iterations: int
    certified_epsilon: float
    converged: bool
    last_step: float


def set_bellman_apply(imdp: IntervalMdp, vbox: IntervalVector) -> IntervalVector:
    """Image of a value box: [f_{C̲}(V̲), f_{C̄}(V̄)]."""
    check_shape("value box", vbox.lo, (imdp.num_states,))
    return IntervalVector(
        bellman_apply(imdp.lower_mdp, vbox.lo),
        bellman_apply(imdp.upper_mdp, vbox.hi),
    )


def inflate(vbox: IntervalVector, epsilon: float) -> IntervalVector:
    """[lo − ε·1, hi + ε·1]."""
    if epsilon < 0:
        raise InvalidParameterError("Inflation must be non-negative", context={"epsilon": epsilon})
    return IntervalVector(vbox.lo - epsilon, vbox.hi + epsilon)


def set_value_iteration(
    imdp: IntervalMdp,
    v0: IntervalVector,
    epsilon: float | None = None,
    max_iters: int | None = None,
) -> SetVISolution:
    """Iterate the set-based operator until d_H(𝒱^k, 𝒱^{k−1})·2γ/(1−γ) < ε.

    Non-convergence is not an error: the solution is returned with converged=False and
    a wider a-posteriori certificate.
    """
    settings = get_settings()
    epsilon = settings.default_epsilon if epsilon is None else epsilon
    max_iters = settings.default_max_iters if max_iters is None else max_iters
    if not epsilon > 0:
        raise InvalidParameterError("epsilon must be positive", context={"epsilon": epsilon})
    if max_iters < 1:
        raise InvalidParameterError("max_iters must be >= 1", context={"max_iters": max_iters})

    gamma = imdp.discount
    factor = 2.0 * gamma / (1.0 - gamma)
    box = v0
    step = float("inf")
    converged = False
    k = 0
    while k < max_iters:
        nxt = set_bellman_apply(imdp, box)
        k += 1
        step = hausdorff_interval(nxt, box)
        box = nxt
        if step * factor < epsilon:
            converged = True
            break

    certified = epsilon if converged else step * factor
    VALUE_ITERATIONS_TOTAL.labels(solver="set_vi").inc(k)
    SOLVES_TOTAL.labels(solver="set_vi", outcome="converged" if converged else "max_iters").inc()
    log = logger.info if converged else logger.warning
    log(
        "Set value iteration converged" if converged else "Set value iteration hit max_iters",
        extra={"data": {"iterations": k, "last_step": step, "certified_epsilon": certified}},
    )
    return SetVISolution(
        box=box,
        inflated=inflate(box, certified / 2.0),
        iterations=k,
        certified_epsilon=certified,
        converged=converged,
        last_step=step,
    )


def fixed_point_box(
    imdp: IntervalMdp, epsilon: float | None = None, max_iters: int | None = None
) -> IntervalVector:
    """Fixed-point box [V̲*, V̄*] from two independent endpoint value iterations.

    Raises:
        ConvergenceError: If either endpoint solve fails to converge.
    """
    zeros = np.zeros(imdp.num_states)
    ends = []
    for name, mdp in (("lower", imdp.lower_mdp), ("upper", imdp.upper_mdp)):
        result = value_iteration(mdp, zeros, epsilon=epsilon, max_iters=max_iters)
        if not result.converged:
            raise ConvergenceError(
                "Endpoint value iteration did not converge",
                context={"endpoint": name, "iterations": result.iterations},
            )
        ends.append(result.values)
    # Endpoint solves stop at different iterations and may cross by up to epsilon.
    lo, hi = ends
    return IntervalVector(np.minimum(lo, hi), np.maximum(lo, hi))
