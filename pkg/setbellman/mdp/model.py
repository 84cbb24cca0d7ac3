"""Finite discounted MDP value objects.

The transition kernel uses a column-per-state-action layout: ``kernel[s_next, s * A + a]``
is the probability of moving to ``s_next`` after taking action ``a`` in state ``s``.
Every column of the kernel is a probability distribution.

Usage:
    from setbellman.mdp.model import Mdp, Policy, validate_mdp

    mdp = Mdp(kernel=[[1.0, 1.0]], cost=[[0.0, 1.0]], discount=0.9)
    assert validate_mdp(mdp) == []
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from setbellman.common.config import get_settings
from setbellman.common.exceptions import (
    DimensionMismatchError,
    InvalidParameterError,
    SpecValidationError,
    check_shape,
)


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=float)
    out.setflags(write=False)
    return out


def column_index(s: int, a: int, num_actions: int) -> int:
    """Kernel column of the state-action pair (s, a)."""
    return s * num_actions + a


@dataclass(frozen=True, eq=False)
class Mdp:
    """Discounted infinite-horizon MDP (S states, A actions, kernel P, cost C, discount γ).

    Construction only checks shapes; `validate_mdp` reports the probabilistic invariants
    and `ensure_valid` turns a non-empty report into an exception.
    """

    kernel: np.ndarray
    cost: np.ndarray
    discount: float

    def __post_init__(self) -> None:
        kernel, cost = _frozen(self.kernel), _frozen(self.cost)
        if cost.ndim != 2:
            raise DimensionMismatchError(
                "cost must be a 2-D S×A matrix", context={"shape": list(cost.shape)}
            )
        s, a = cost.shape
        if s < 1 or a < 1:
            raise DimensionMismatchError(
                "MDP needs at least one state and one action", context={"S": s, "A": a}
            )
        check_shape("kernel", kernel, (s, s * a))
        object.__setattr__(self, "kernel", kernel)
        object.__setattr__(self, "cost", cost)
        object.__setattr__(self, "discount", float(self.discount))

    @property
    def num_states(self) -> int:
        return self.cost.shape[0]

    @property
    def num_actions(self) -> int:
        return self.cost.shape[1]

    def with_cost(self, cost) -> Mdp:
        """Same kernel and discount, different cost matrix."""
        return Mdp(self.kernel, cost, self.discount)

    def renormalized(self) -> Mdp:
        """Copy with every kernel column rescaled to sum to exactly 1.

        Only columns within the stochasticity tolerance are accepted; anything further
        off is an input error, not rounding noise.
        """
        tol = get_settings().stochastic_tol
        sums = self.kernel.sum(axis=0)
        bad = np.flatnonzero(np.abs(sums - 1.0) > tol)
        if bad.size:
            raise SpecValidationError(
                "Kernel columns too far from stochastic to renormalize",
                context={"columns": bad.tolist()},
            )
        return Mdp(self.kernel / sums, self.cost, self.discount)


def validate_mdp(mdp: Mdp, tol: float | None = None) -> list[str]:
    """Check the kernel, cost and discount invariants.

    Returns:
        One human-readable violation per offending column/entry; empty when valid.
    """
    tol = get_settings().stochastic_tol if tol is None else tol
    s_count, a_count = mdp.num_states, mdp.num_actions
    violations: list[str] = []

    if not np.all(np.isfinite(mdp.kernel)):
        for s_next, col in np.argwhere(~np.isfinite(mdp.kernel)):
            s, a = divmod(int(col), a_count)
            violations.append(f"kernel[{s_next}, ({s},{a})] is not finite")

    for s_next, col in np.argwhere(mdp.kernel < 0):
        s, a = divmod(int(col), a_count)
        violations.append(
            f"kernel[{s_next}, ({s},{a})] = {mdp.kernel[s_next, col]:.6g} is negative"
        )

    sums = mdp.kernel.sum(axis=0)
    for col in np.flatnonzero(~(np.abs(sums - 1.0) <= tol)):
        s, a = divmod(int(col), a_count)
        violations.append(f"kernel column ({s},{a}) sums to {sums[col]:.12g}, expected 1")

    for s, a in np.argwhere(~np.isfinite(mdp.cost)):
        violations.append(f"cost[{s}, {a}] is not finite")

    if not (0.0 < mdp.discount < 1.0):
        violations.append(f"discount {mdp.discount} is not in (0, 1)")

    if s_count * a_count == 0:
        violations.append("empty state or action set")
    return violations


def ensure_valid(mdp: Mdp) -> Mdp:
    """Raise SpecValidationError carrying the full report if `mdp` is invalid."""
    report = validate_mdp(mdp)
    if report:
        raise SpecValidationError("Invalid MDP", context={"violations": report})
    return mdp


def as_value_function(v, num_states: int) -> np.ndarray:
    """Coerce `v` to a finite length-S float vector."""
    arr = np.asarray(v, dtype=float)
    check_shape("value function", arr, (num_states,))
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError("Value function has non-finite entries")
    return arr


@dataclass(frozen=True, eq=False)
class Policy:
    """Stationary randomized policy, ``probs[s, a] = π(s, a)``."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = _frozen(self.probs)
        if probs.ndim != 2:
            raise DimensionMismatchError(
                "Policy must be an S×A matrix", context={"shape": list(probs.shape)}
            )
        tol = get_settings().stochastic_tol
        if np.any(probs < -tol) or np.any(probs > 1.0 + tol):
            raise InvalidParameterError("Policy probabilities must lie in [0, 1]")
        rows = np.flatnonzero(np.abs(probs.sum(axis=1) - 1.0) > tol)
        if rows.size:
            raise InvalidParameterError(
                "Policy rows must sum to 1", context={"states": rows.tolist()}
            )
        object.__setattr__(self, "probs", probs)

    @classmethod
    def deterministic(cls, actions, num_actions: int) -> Policy:
        """Policy placing probability 1 on ``actions[s]`` in each state."""
        actions = np.asarray(actions, dtype=int)
        if np.any(actions < 0) or np.any(actions >= num_actions):
            raise InvalidParameterError(
                "Action index out of range", context={"num_actions": num_actions}
            )
        probs = np.zeros((actions.shape[0], num_actions))
        probs[np.arange(actions.shape[0]), actions] = 1.0
        return cls(probs)

    @classmethod
    def uniform(cls, num_states: int, num_actions: int) -> Policy:
        return cls(np.full((num_states, num_actions), 1.0 / num_actions))

    @property
    def num_states(self) -> int:
        return self.probs.shape[0]

    @property
    def num_actions(self) -> int:
        return self.probs.shape[1]

    @property
    def is_deterministic(self) -> bool:
        """Each row has exactly one entry equal to 1."""
        return bool(np.all((self.probs == 1.0).sum(axis=1) == 1))

    @property
    def actions(self) -> np.ndarray:
        """Chosen action per state; only meaningful for deterministic policies."""
        return self.probs.argmax(axis=1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Policy):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    __hash__ = None


def policy_matrix(policy: Policy) -> np.ndarray:
    """Block-diagonal S×(S·A) matrix M_π with ``M[s, s*A + a] = π(s, a)``."""
    s_count, a_count = policy.probs.shape
    m = np.zeros((s_count, s_count * a_count))
    for s in range(s_count):
        m[s, s * a_count : (s + 1) * a_count] = policy.probs[s]
    return m


def stationary_cost(policy: Policy, cost) -> np.ndarray:
    """Expected immediate cost per state, ν(π)[s] = Σ_a π(s, a)·C[s, a]."""
    cost = np.asarray(cost, dtype=float)
    check_shape("cost", cost, policy.probs.shape)
    return np.einsum("sa,sa->s", policy.probs, cost)


def stationary_cost_kron(policy: Policy, cost) -> np.ndarray:
    """ν(π) from its matrix form Σ_s e_s (e_sᵀ ⊗ π_s) vec(Cᵀ), built explicitly.

    Slower than `stationary_cost`; kept as an independent formulation.
    """
    cost = np.asarray(cost, dtype=float)
    check_shape("cost", cost, policy.probs.shape)
    s_count, _ = cost.shape
    eye = np.eye(s_count)
    vec_ct = cost.reshape(-1)  # row-major rows of C == stacked columns of Cᵀ
    nu = np.zeros(s_count)
    for s in range(s_count):
        selector = np.kron(eye[s], policy.probs[s])
        nu += eye[s] * (selector @ vec_ct)
    return nu
