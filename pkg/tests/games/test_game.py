"""Tests for single-controller games and their player views."""

from __future__ import annotations

import numpy as np
import pytest

from setbellman.common.exceptions import DimensionMismatchError, InvalidParameterError
from setbellman.games.game import (
    SingleControllerGame,
    interval_over_approx,
    player_one_cost,
    player_one_kernel,
    player_one_mdp,
    player_two_cost,
    player_two_kernel,
    player_two_mdp,
)
from setbellman.mdp.model import Policy, validate_mdp
from tests.factories import make_random_game, make_random_policy


@pytest.fixture
def game(rng) -> SingleControllerGame:
    return make_random_game(rng, num_states=4, num_actions=3)


class TestConstruction:
    def test_coupled_game_keeps_c_and_j(self, game):
        assert game.coupling_form == "additive"
        assert game.base_cost.shape == (4, 3)
        assert game.coupling.shape == (4, 3)
        assert game.d1.shape == (4, 3, 3)
        assert game.validate() == []

    def test_additive_tensors(self):
        game = SingleControllerGame.from_coupling(
            [[1.0, 1.0]], [[1.0, 2.0]], [[0.5, 3.0]], 0.9, 0.9, form="additive"
        )
        np.testing.assert_array_equal(game.d1[0], [[1.5, 4.0], [2.5, 5.0]])
        np.testing.assert_array_equal(game.d2[0], [[0.5, -2.0], [1.5, -1.0]])

    def test_matching_tensors(self):
        game = SingleControllerGame.from_coupling(
            [[1.0, 1.0]], [[1.0, 2.0]], [[0.5, 3.0]], 0.9, 0.9, form="matching"
        )
        np.testing.assert_array_equal(game.d1[0], [[1.5, 1.0], [2.0, 5.0]])
        np.testing.assert_array_equal(game.d2[0], [[0.5, 1.0], [2.0, -1.0]])

    def test_general_tensor_form(self, rng):
        d1 = rng.random((2, 2, 3))
        d2 = rng.random((2, 3, 2))
        kernel = np.full((2, 4), 0.5)
        game = SingleControllerGame(kernel, d1, d2, 0.5, 0.6)
        assert (game.actions_p1, game.actions_p2) == (2, 3)
        assert game.coupling_form == "tensor"

    def test_negative_coupling_rejected(self):
        with pytest.raises(InvalidParameterError):
            SingleControllerGame.from_coupling([[1.0, 1.0]], [[0.0, 0.0]], [[-1.0, 0.0]], 0.9, 0.9)

    def test_unknown_form_rejected(self):
        with pytest.raises(InvalidParameterError):
            SingleControllerGame.from_coupling(
                [[1.0, 1.0]], [[0.0, 0.0]], [[1.0, 0.0]], 0.9, 0.9, form="bilinear"
            )

    @pytest.mark.parametrize(("g1", "g2"), [(0.0, 0.5), (0.5, 1.0), (1.2, 0.5)])
    def test_discounts_checked(self, g1, g2):
        with pytest.raises(InvalidParameterError):
            SingleControllerGame.from_coupling([[1.0, 1.0]], [[0.0, 0.0]], [[1.0, 0.0]], g1, g2)

    def test_d2_shape_checked(self):
        with pytest.raises(DimensionMismatchError):
            SingleControllerGame([[1.0, 1.0]], np.zeros((1, 2, 2)), np.zeros((1, 3, 2)), 0.5, 0.5)


class TestPlayerOneView:
    def test_deterministic_opponent_adds_its_coupling(self, game):
        pi2 = Policy.deterministic([2, 0, 1, 2], 3)
        expected = game.base_cost + game.coupling[np.arange(4), [2, 0, 1, 2]][:, None]
        np.testing.assert_allclose(player_one_cost(game, pi2), expected)

    def test_zero_coupling_decouples(self, rng):
        game = SingleControllerGame.from_coupling(
            np.full((2, 4), 0.5), rng.random((2, 2)), np.zeros((2, 2)), 0.7, 0.7
        )
        for pi2 in (Policy.uniform(2, 2), Policy.deterministic([1, 0], 2)):
            np.testing.assert_array_equal(player_one_cost(game, pi2), game.base_cost)

    def test_uniform_opponent_averages_coupling(self, game):
        expected = game.base_cost + game.coupling.mean(axis=1, keepdims=True)
        np.testing.assert_allclose(player_one_cost(game, Policy.uniform(4, 3)), expected)

    def test_kernel_independent_of_opponent(self, game, rng):
        a = player_one_kernel(game, make_random_policy(rng, 4, 3))
        b = player_one_kernel(game, Policy.deterministic([0, 1, 2, 0], 3))
        np.testing.assert_array_equal(a, b)
        np.testing.assert_array_equal(a, game.kernel)

    def test_mdp_is_valid(self, game, rng):
        mdp = player_one_mdp(game, make_random_policy(rng, 4, 3))
        assert validate_mdp(mdp) == []
        assert mdp.discount == game.discount_p1

    def test_policy_shape_checked(self, game):
        with pytest.raises(DimensionMismatchError):
            player_one_cost(game, Policy.uniform(4, 2))


class TestPlayerTwoView:
    def test_cost_subtracts_player_one_coupling(self, game):
        actions = [1, 1, 0, 2]
        expected = game.base_cost - game.coupling[np.arange(4), actions][:, None]
        np.testing.assert_allclose(
            player_two_cost(game, Policy.deterministic(actions, 3)), expected
        )

    def test_kernel_is_stochastic_and_action_free(self, game, rng):
        kernel = player_two_kernel(game, make_random_policy(rng, 4, 3))
        np.testing.assert_allclose(kernel.sum(axis=0), 1.0)
        blocks = kernel.reshape(4, 4, 3)
        for b in range(1, 3):
            np.testing.assert_array_equal(blocks[:, :, b], blocks[:, :, 0])

    def test_mdp_uses_player_two_discount(self, rng):
        game = make_random_game(rng, discount_p1=0.7, discount_p2=0.3)
        assert player_two_mdp(game, Policy.uniform(3, 2)).discount == 0.3


class TestIntervalOverApprox:
    def test_zero_coupling_degenerate(self, rng):
        game = SingleControllerGame.from_coupling(
            np.full((2, 4), 0.5), rng.random((2, 2)), np.zeros((2, 2)), 0.7, 0.7
        )
        box = interval_over_approx(game)
        assert box.is_degenerate
        np.testing.assert_array_equal(box.lo, game.base_cost)

    def test_additive_box(self, game):
        box = interval_over_approx(game)
        np.testing.assert_allclose(box.lo, game.base_cost + game.coupling.min(axis=1)[:, None])
        np.testing.assert_allclose(box.hi, game.base_cost + game.coupling.max(axis=1)[:, None])

    def test_additive_upper_end_attained(self, game):
        pi2 = Policy.deterministic(game.coupling.argmax(axis=1), 3)
        np.testing.assert_allclose(player_one_cost(game, pi2), interval_over_approx(game).hi)

    def test_matching_box_is_c_to_c_plus_j(self, rng):
        game = make_random_game(rng, num_states=3, num_actions=3, form="matching")
        box = interval_over_approx(game)
        np.testing.assert_allclose(box.lo, game.base_cost)
        np.testing.assert_allclose(box.hi, game.base_cost + game.coupling)

    def test_matching_upper_end_needs_same_action(self, rng):
        game = make_random_game(rng, num_states=3, num_actions=2, form="matching")
        hi = interval_over_approx(game).hi
        for a in range(2):
            cost = player_one_cost(game, Policy.deterministic([a, a, a], 2))
            np.testing.assert_allclose(cost[:, a], hi[:, a])

    @pytest.mark.parametrize("form", ["additive", "matching"])
    def test_contains_every_mixed_opponent_cost(self, rng, form):
        game = make_random_game(rng, num_states=4, num_actions=3, form=form)
        box = interval_over_approx(game)
        for _ in range(100):
            pi2 = make_random_policy(rng, 4, 3)
            assert box.contains(player_one_cost(game, pi2), tol=1e-12)
