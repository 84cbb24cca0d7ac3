"""Finite discounted MDPs: Bellman operator, value iteration, policy evaluation,
and interval-cost policy certification."""

from setbellman.mdp.bellman import (
    ValueIterationResult,
    bellman_apply,
    greedy_policy,
    policy_evaluation,
    q_values,
    value_iteration,
)
from setbellman.mdp.certify import OptimalityCertificate, certify_interval_optimality
from setbellman.mdp.model import (
    Mdp,
    Policy,
    ensure_valid,
    policy_matrix,
    stationary_cost,
    validate_mdp,
)

__all__ = [
    "Mdp",
    "OptimalityCertificate",
    "Policy",
    "ValueIterationResult",
    "bellman_apply",
    "certify_interval_optimality",
    "ensure_valid",
    "greedy_policy",
    "policy_evaluation",
    "policy_matrix",
    "q_values",
    "stationary_cost",
    "validate_mdp",
    "value_iteration",
]
