"""Classic Bellman operator, value iteration and policy evaluation.

Usage:
    from setbellman.mdp.bellman import value_iteration

    result = value_iteration(mdp, v0=np.zeros(mdp.num_states), epsilon=1e-6)
    if result.converged:
        ...  # result.values is within epsilon / 2 of V*
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from setbellman.common.config import get_settings
from setbellman.common.exceptions import InvalidParameterError, SolverError, check_shape
from setbellman.common.logging import get_logger
from setbellman.common.metrics import SOLVES_TOTAL, VALUE_ITERATIONS_TOTAL
from setbellman.mdp.model import (
    Mdp,
    Policy,
    as_value_function,
    policy_matrix,
    stationary_cost,
)

logger = get_logger("MDP")


def q_values(mdp: Mdp, v) -> np.ndarray:
    """S×A matrix of C[s, a] + γ·Σ_{s'} P[s', (s, a)]·v[s']."""
    v = as_value_function(v, mdp.num_states)
    continuation = (mdp.kernel.T @ v).reshape(mdp.num_states, mdp.num_actions)
    return mdp.cost + mdp.discount * continuation


def bellman_apply(mdp: Mdp, v) -> np.ndarray:
    """Apply the Bellman operator: per-state minimum of the action values."""
    return q_values(mdp, v).min(axis=1)


def greedy_policy(mdp: Mdp, v) -> Policy:
    """Deterministic policy picking, in each state, the first action attaining the minimum."""
    actions = np.argmin(q_values(mdp, v), axis=1)
    return Policy.deterministic(actions, mdp.num_actions)


def induced_chain(kernel, policy: Policy) -> np.ndarray:
    """S×S matrix M_π·Pᵀ: row s is the next-state distribution under π from s."""
    return policy_matrix(policy) @ np.asarray(kernel, dtype=float).T


def policy_evaluation(mdp: Mdp, policy: Policy) -> np.ndarray:
    """Stationary value function of `policy`: solve (I − γ·M_π·Pᵀ)·V = ν(π).

    Raises:
        SolverError: If the dense solve fails or its residual exceeds 1e-9 (relative to
            the solution scale).
    """
    check_shape("policy", policy.probs, (mdp.num_states, mdp.num_actions))
    nu = stationary_cost(policy, mdp.cost)
    system = np.eye(mdp.num_states) - mdp.discount * induced_chain(mdp.kernel, policy)
    try:
        values = scipy.linalg.solve(system, nu)
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise SolverError(
            "Policy evaluation linear solve failed",
            context={"num_states": mdp.num_states, "error": str(e)},
        ) from e

    residual = float(np.max(np.abs(system @ values - nu))) if mdp.num_states else 0.0
    if residual > 1e-9 * max(1.0, float(np.max(np.abs(values)))):
        raise SolverError(
            "Policy evaluation residual too large", context={"residual": residual}
        )
    return values


def stopping_threshold(epsilon: float, discount: float) -> float:
    """Successive-difference bound ε(1−γ)/(2γ) that certifies ε/2 accuracy."""
    return epsilon * (1.0 - discount) / (2.0 * discount)


@dataclass(frozen=True)
class ValueIterationResult:
    """Outcome of `value_iteration`.

    Attributes:
        values: Last iterate; within epsilon / 2 of V* when converged.
        iterations: Number of Bellman applications performed.
        converged: Whether the stopping rule fired before max_iters.
        last_step: ∞-norm of the final successive difference.
    """

    values: np.ndarray
    iterations: int
    converged: bool
    last_step: float

    def __iter__(self):
        # Unpacks as (values, iterations, converged)
        return iter((self.values, self.iterations, self.converged))


def value_iteration(
    mdp: Mdp,
    v0,
    epsilon: float | None = None,
    max_iters: int | None = None,
) -> ValueIterationResult:
    """Iterate the Bellman operator until the certified stopping rule fires.

    Stops when ‖v^{k+1} − v^k‖∞ < ε(1−γ)/(2γ), which guarantees the returned iterate
    is within ε/2 of the fixed point, or after `max_iters` applications.

    Args:
        mdp: The MDP to solve.
        v0: Initial value function.
        epsilon: Target accuracy (> 0). Defaults to Settings.default_epsilon.
        max_iters: Iteration cap. Defaults to Settings.default_max_iters.

    Raises:
        InvalidParameterError: If epsilon <= 0 or max_iters < 1.
    """
    settings = get_settings()
    epsilon = settings.default_epsilon if epsilon is None else epsilon
    max_iters = settings.default_max_iters if max_iters is None else max_iters
    if not epsilon > 0:
        raise InvalidParameterError("epsilon must be positive", context={"epsilon": epsilon})
    if max_iters < 1:
        raise InvalidParameterError("max_iters must be >= 1", context={"max_iters": max_iters})

    threshold = stopping_threshold(epsilon, mdp.discount)
    v = as_value_function(v0, mdp.num_states)
    step = float("inf")
    converged = False
    k = 0
    while k < max_iters:
        v_next = bellman_apply(mdp, v)
        k += 1
        step = float(np.max(np.abs(v_next - v)))
        v = v_next
        if step < threshold:
            converged = True
            break

    VALUE_ITERATIONS_TOTAL.labels(solver="vi").inc(k)
    SOLVES_TOTAL.labels(solver="vi", outcome="converged" if converged else "max_iters").inc()
    if converged:
        logger.debug(
            "Value iteration converged",
            extra={"data": {"iterations": k, "last_step": step, "epsilon": epsilon}},
        )
    else:
        logger.warning(
            "Value iteration hit max_iters before convergence",
            extra={"data": {"iterations": k, "last_step": step, "threshold": threshold}},
        )
    return ValueIterationResult(values=v, iterations=k, converged=converged, last_step=step)
