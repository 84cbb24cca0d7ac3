"""Certify that a deterministic policy is optimal for every cost in an interval box.

Optimality of a policy at both endpoint costs only guarantees optimality on the segment
between them: the optimal value is concave in the cost while the policy's value is linear.
The box certificate is therefore checked exactly. For a fixed policy π, its value
V_π = R·ν with R = (I − γ·M_π·Pᵀ)⁻¹ ≥ 0 depends only on the costs of the chosen actions,
and each one-step advantage Q_π(s, a) − V_π(s) is affine in the cost, so its minimum over
the box is attained entrywise at an endpoint.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from setbellman.common.config import get_settings
from setbellman.common.exceptions import (
    InvalidParameterError,
    SolverError,
    check_shape,
)
from setbellman.common.logging import get_logger
from setbellman.intervals.arithmetic import IntervalMatrix
from setbellman.mdp.bellman import bellman_apply, induced_chain, policy_evaluation
from setbellman.mdp.model import Mdp, Policy

logger = get_logger("MDP")


@dataclass(frozen=True)
class EndpointWitness:
    """Policy value and Bellman residual ‖V_π − f_C(V_π)‖∞ at one endpoint cost."""

    values: np.ndarray
    residual: float

    @property
    def optimal(self) -> bool:
        return self.residual <= get_settings().certify_tol


@dataclass(frozen=True)
class OptimalityCertificate:
    """Result of `certify_interval_optimality`.

    `endpoints_optimal` is the classic test at the two endpoint costs; it is necessary but
    not sufficient. `certified` is the sound test over the whole box and implies it.

    Attributes:
        certified: The policy is optimal for every cost in [cost_lo, cost_hi].
        endpoints_optimal: The policy is Bellman-optimal at cost_lo and at cost_hi.
        lower: Witness at cost_lo.
        upper: Witness at cost_hi.
        worst_margin: Smallest one-step advantage of any other action over the box
            (≥ −tolerance iff certified).
        worst_state_action: (s, a) attaining worst_margin, or None when A == 1.
    """

    certified: bool
    endpoints_optimal: bool
    lower: EndpointWitness
    upper: EndpointWitness
    worst_margin: float
    worst_state_action: tuple[int, int] | None

    def __bool__(self) -> bool:
        return self.certified


def endpoint_values(
    kernel, discount: float, policy: Policy, cost_lo, cost_hi
) -> tuple[EndpointWitness, EndpointWitness]:
    """Policy value and Bellman residual at both endpoint costs."""
    witnesses = []
    for cost in (cost_lo, cost_hi):
        mdp = Mdp(kernel, cost, discount)
        values = policy_evaluation(mdp, policy)
        residual = float(np.max(np.abs(values - bellman_apply(mdp, values))))
        witnesses.append(EndpointWitness(values=values, residual=residual))
    return witnesses[0], witnesses[1]


def _worst_advantage(
    kernel: np.ndarray, discount: float, policy: Policy, box: IntervalMatrix
) -> tuple[float, tuple[int, int] | None]:
    s_count, a_count = box.shape
    if a_count == 1:
        return float("inf"), None

    chosen = policy.actions
    rows = np.arange(s_count)
    try:
        resolvent = scipy.linalg.inv(
            np.eye(s_count) - discount * induced_chain(kernel, policy)
        )
    except scipy.linalg.LinAlgError as e:
        raise SolverError("Resolvent inversion failed", context={"error": str(e)}) from e

    # weights[(s, a), j] = ∂(Q_π(s, a) − V_π(s)) / ∂ν_j
    weights = discount * (kernel.T @ resolvent)
    weights -= np.repeat(resolvent, a_count, axis=0)
    nu_lo = box.lo[rows, chosen]
    nu_hi = box.hi[rows, chosen]
    worst = np.minimum(weights * nu_lo, weights * nu_hi).sum(axis=1)
    margins = (box.lo.reshape(-1) + worst).reshape(s_count, a_count)
    margins[rows, chosen] = np.inf

    flat = int(np.argmin(margins))
    s, a = divmod(flat, a_count)
    return float(margins[s, a]), (s, a)


def certify_interval_optimality(
    kernel, discount: float, policy: Policy, cost_lo, cost_hi
) -> OptimalityCertificate:
    """Decide whether `policy` stays optimal over the whole cost box [cost_lo, cost_hi].

    Raises:
        IntervalInversionError: If cost_lo > cost_hi anywhere.
        InvalidParameterError: If the policy is not deterministic.
    """
    box = IntervalMatrix(cost_lo, cost_hi)
    kernel = np.asarray(kernel, dtype=float)
    check_shape("policy", policy.probs, box.shape)
    if not policy.is_deterministic:
        raise InvalidParameterError("Certification requires a deterministic policy")

    tol = get_settings().certify_tol
    lower, upper = endpoint_values(kernel, discount, policy, box.lo, box.hi)
    endpoints_optimal = lower.optimal and upper.optimal
    worst_margin, worst_sa = _worst_advantage(kernel, discount, policy, box)
    certified = endpoints_optimal and worst_margin >= -tol

    if endpoints_optimal and not certified:
        logger.info(
            "Policy optimal at both endpoints but not across the box",
            extra={"data": {"worst_margin": worst_margin, "state_action": worst_sa}},
        )
    return OptimalityCertificate(
        certified=certified,
        endpoints_optimal=endpoints_optimal,
        lower=lower,
        upper=upper,
        worst_margin=worst_margin,
        worst_state_action=worst_sa,
    )
