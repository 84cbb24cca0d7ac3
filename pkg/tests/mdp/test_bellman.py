"""Tests for the Bellman operator, value iteration and policy evaluation."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from setbellman.common.exceptions import DimensionMismatchError, InvalidParameterError
from setbellman.common.rng import make_rng
from setbellman.grid.generator import grid_mdp
from setbellman.mdp.bellman import (
    bellman_apply,
    greedy_policy,
    induced_chain,
    policy_evaluation,
    q_values,
    stopping_threshold,
    value_iteration,
)
from setbellman.mdp.model import Mdp, Policy, stationary_cost
from tests.factories import make_random_mdp, make_random_policy

seeds = st.integers(0, 2**32 - 1)


def _one_state(cost, discount=0.9) -> Mdp:
    return Mdp([[1.0] * len(cost)], [list(cost)], discount)


class TestBellmanApply:
    def test_picks_cheaper_action(self):
        assert bellman_apply(_one_state([0.0, 1.0]), [10.0]).tolist() == [9.0]

    def test_fixed_point(self):
        assert bellman_apply(_one_state([1.0, 1.0]), [10.0]).tolist() == [10.0]

    def test_zero_values_give_row_min(self, grid_3x3):
        mdp = grid_mdp(grid_3x3, discount=0.7)
        np.testing.assert_array_equal(
            bellman_apply(mdp, np.zeros(mdp.num_states)), mdp.cost.min(axis=1)
        )

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            bellman_apply(_one_state([0.0, 1.0]), [1.0, 2.0])

    def test_non_finite_rejected(self):
        with pytest.raises(InvalidParameterError):
            bellman_apply(_one_state([0.0, 1.0]), [np.inf])

    def test_q_values(self):
        q = q_values(_one_state([0.0, 1.0]), [10.0])
        np.testing.assert_allclose(q, [[9.0, 10.0]])


class TestBellmanProperties:
    @settings(max_examples=50, deadline=None)
    @given(seed=seeds)
    def test_contraction(self, seed):
        rng = make_rng(seed)
        mdp = make_random_mdp(rng)
        v, w = rng.normal(size=(2, mdp.num_states)) * 10
        lhs = np.max(np.abs(bellman_apply(mdp, v) - bellman_apply(mdp, w)))
        assert lhs <= mdp.discount * np.max(np.abs(v - w)) + 1e-12

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds)
    def test_monotone_in_values(self, seed):
        rng = make_rng(seed)
        mdp = make_random_mdp(rng)
        v = rng.normal(size=mdp.num_states)
        w = v + rng.random(mdp.num_states)
        assert np.all(bellman_apply(mdp, v) <= bellman_apply(mdp, w) + 1e-12)

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds)
    def test_monotone_in_cost(self, seed):
        rng = make_rng(seed)
        mdp = make_random_mdp(rng)
        higher = mdp.with_cost(mdp.cost + rng.random(mdp.cost.shape))
        v = rng.normal(size=mdp.num_states)
        assert np.all(bellman_apply(mdp, v) <= bellman_apply(higher, v) + 1e-12)

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds)
    def test_lipschitz_in_cost_and_values(self, seed):
        rng = make_rng(seed)
        mdp = make_random_mdp(rng)
        other = mdp.with_cost(rng.random(mdp.cost.shape))
        v, w = rng.normal(size=(2, mdp.num_states))
        lhs = np.max(np.abs(bellman_apply(mdp, v) - bellman_apply(other, w)))
        cost_term = mdp.num_states * np.abs((mdp.cost - other.cost).T).sum(axis=1).max()
        assert lhs <= cost_term + mdp.discount * np.max(np.abs(v - w)) + 1e-12


class TestGreedyPolicy:
    def test_cheaper_action(self):
        assert greedy_policy(_one_state([0.0, 1.0]), [0.0]).actions.tolist() == [0]

    @pytest.mark.parametrize("v", [0.0, 10.0, -3.5])
    def test_ties_break_to_first_action(self, v):
        policy = greedy_policy(_one_state([1.0, 1.0]), [v])
        assert policy == Policy.deterministic([0], 2)

    @settings(max_examples=30, deadline=None)
    @given(seed=seeds, shift=st.floats(-100, 100))
    def test_invariant_under_constant_shift(self, seed, shift):
        rng = make_rng(seed)
        mdp = make_random_mdp(rng)
        v = rng.normal(size=mdp.num_states)
        q = q_values(mdp, v)
        gaps = np.sort(q, axis=1)[:, 1] - q.min(axis=1)
        assume(np.min(gaps) > 1e-9)
        assert greedy_policy(mdp, v) == greedy_policy(mdp, v + shift)

    def test_consistent_at_optimum(self, grid_3x3):
        mdp = grid_mdp(grid_3x3, discount=0.7)
        v_star = value_iteration(mdp, np.zeros(mdp.num_states), epsilon=1e-10).values
        policy = greedy_policy(mdp, v_star)
        q = q_values(mdp, v_star)
        chosen = q[np.arange(mdp.num_states), policy.actions]
        np.testing.assert_array_equal(chosen, bellman_apply(mdp, v_star))


class TestPolicyEvaluation:
    def test_constant_cost_single_state(self):
        mdp = _one_state([1.0, 1.0])
        for policy in (Policy.deterministic([1], 2), Policy.uniform(1, 2)):
            np.testing.assert_allclose(policy_evaluation(mdp, policy), [10.0])

    def test_geometric_series(self):
        np.testing.assert_allclose(
            policy_evaluation(_one_state([3.0, 3.0], 0.5), Policy.uniform(1, 2)), [6.0]
        )

    def test_satisfies_fixed_point_equation(self, rng):
        mdp = make_random_mdp(rng, num_states=6)
        policy = make_random_policy(rng, 6, 3)
        v = policy_evaluation(mdp, policy)
        rhs = stationary_cost(policy, mdp.cost) + mdp.discount * induced_chain(
            mdp.kernel, policy
        ) @ v
        np.testing.assert_allclose(v, rhs, atol=1e-9)

    def test_policy_shape_checked(self):
        with pytest.raises(DimensionMismatchError):
            policy_evaluation(_one_state([1.0, 1.0]), Policy.uniform(1, 3))


class TestValueIteration:
    def test_converges_to_example_fixed_point(self):
        result = value_iteration(_one_state([1.0, 1.0]), [0.0], epsilon=1e-6)
        assert result.converged
        assert abs(result.values[0] - 10.0) <= 5e-7

    def test_starting_at_fixed_point_stops_immediately(self):
        result = value_iteration(_one_state([1.0, 1.0]), [10.0], epsilon=1e-6)
        assert (result.iterations, result.converged, result.last_step) == (1, True, 0.0)

    def test_unpacks_as_triple(self):
        values, iterations, converged = value_iteration(_one_state([1.0, 1.0]), [10.0])
        assert converged and iterations == 1 and values.tolist() == [10.0]

    def test_max_iters_reports_not_converged(self):
        result = value_iteration(_one_state([1.0, 1.0]), [0.0], epsilon=1e-12, max_iters=3)
        assert not result.converged
        assert result.iterations == 3

    @pytest.mark.parametrize("kwargs", [{"epsilon": 0.0}, {"epsilon": -1.0}, {"max_iters": 0}])
    def test_bad_parameters(self, kwargs):
        with pytest.raises(InvalidParameterError):
            value_iteration(_one_state([1.0, 1.0]), [0.0], **kwargs)

    def test_stopping_threshold(self):
        assert stopping_threshold(0.9, 0.9) == pytest.approx(0.05)

    def test_grid_agrees_with_greedy_policy_value(self, grid_3x3):
        mdp = grid_mdp(grid_3x3, discount=0.7)
        epsilon = 1e-6
        result = value_iteration(mdp, np.zeros(mdp.num_states), epsilon=epsilon)
        assert result.converged
        v_pi = policy_evaluation(mdp, greedy_policy(mdp, result.values))
        assert np.max(np.abs(result.values - v_pi)) <= epsilon

    @pytest.mark.acceptance
    @settings(max_examples=200, deadline=None)
    @given(
        seed=seeds,
        s=st.integers(1, 10),
        a=st.integers(1, 5),
        discount=st.floats(0.5, 0.95),
        epsilon=st.sampled_from([1e-2, 1e-4, 1e-6]),
    )
    def test_stopping_rule_is_sound(self, seed, s, a, discount, epsilon):
        """A converged iterate is within epsilon / 2 of its own greedy policy's value."""
        rng = make_rng(seed)
        mdp = make_random_mdp(rng, num_states=s, num_actions=a, discount=discount)
        result = value_iteration(mdp, rng.normal(size=s), epsilon=epsilon)
        assert result.converged
        v_pi = policy_evaluation(mdp, greedy_policy(mdp, result.values))
        assert np.max(np.abs(result.values - v_pi)) <= epsilon / 2 + 1e-12
