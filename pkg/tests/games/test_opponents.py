"""Tests for player-two response strategies."""

from __future__ import annotations

import numpy as np
import pytest

from setbellman.common.exceptions import DimensionMismatchError, InvalidParameterError
from setbellman.common.rng import make_rng
from setbellman.games.opponents import (
    FixedOpponent,
    UniformRandomOpponent,
    ValueIterationOpponent,
    fixed,
    max_vi,
    min_vi,
    uniform_random,
)
from setbellman.mdp.model import Policy
from tests.factories import make_one_state_game, make_random_game

PLAY_0 = Policy.deterministic([0], 2)
PLAY_1 = Policy.deterministic([1], 2)


class TestFactories:
    def test_kinds(self):
        assert min_vi(0.5).kind == "min_vi"
        assert max_vi(0.5).kind == "max_vi"
        assert fixed(PLAY_0).kind == "fixed"
        assert uniform_random(1).kind == "uniform_random"
        assert isinstance(min_vi(0.5), ValueIterationOpponent)

    @pytest.mark.parametrize("gamma", [0.0, 1.0, -0.1, 2.0])
    def test_gamma_checked(self, gamma):
        with pytest.raises(InvalidParameterError):
            min_vi(gamma)
        with pytest.raises(InvalidParameterError):
            max_vi(gamma)

    def test_unknown_init(self):
        with pytest.raises(InvalidParameterError):
            min_vi(0.5, init="normal")


class TestValueIterationOpponent:
    def test_unbound_use_rejected(self):
        with pytest.raises(InvalidParameterError):
            min_vi(0.5).respond(PLAY_0)

    def test_starts_on_first_action(self, rng):
        game = make_random_game(rng)
        opponent = min_vi(0.5)
        opponent.bind(game, rng)
        assert opponent.initial_policy().actions.tolist() == [0, 0, 0]
        np.testing.assert_array_equal(opponent.value, np.zeros(3))

    def test_min_plays_matching_action(self):
        game = make_one_state_game()
        opponent = min_vi(0.9)
        opponent.bind(game, make_rng(0))
        assert opponent.respond(PLAY_0) == PLAY_0
        assert opponent.respond(PLAY_1) == PLAY_1

    def test_max_plays_other_action(self):
        game = make_one_state_game(coupling=(1.0, 0.2))
        opponent = max_vi(0.9)
        opponent.bind(game, make_rng(0))
        assert opponent.respond(PLAY_0) == PLAY_1
        assert opponent.respond(PLAY_1) == PLAY_1

    def test_uses_its_own_discount(self):
        game = make_one_state_game(cost=(2.0, 3.0), coupling=(0.0, 0.0), discount=0.9)
        opponent = min_vi(0.3)
        opponent.bind(game, make_rng(0))
        opponent.respond(PLAY_0)
        opponent.respond(PLAY_0)
        np.testing.assert_allclose(opponent.value, [2.0 + 0.3 * 2.0])

    def test_zero_coupling_matches_plain_value_iteration(self):
        game = make_one_state_game(cost=(1.0, 0.4), coupling=(0.0, 0.0), discount=0.8)
        opponent = min_vi(0.8)
        opponent.bind(game, make_rng(0))
        w = 0.0
        for _ in range(20):
            opponent.respond(PLAY_1)
            w = min(1.0, 0.4) + 0.8 * w
            np.testing.assert_allclose(opponent.value, [w])

    def test_max_value_uses_max(self):
        game = make_one_state_game(cost=(1.0, 0.4), coupling=(0.0, 0.0), discount=0.8)
        opponent = max_vi(0.8)
        opponent.bind(game, make_rng(0))
        opponent.respond(PLAY_0)
        np.testing.assert_allclose(opponent.value, [1.0])

    def test_uniform_init_draws_from_rng(self, rng):
        game = make_random_game(rng)
        opponent = min_vi(0.5, init="uniform")
        opponent.bind(game, make_rng(4))
        w = opponent.value
        assert np.all((w >= 0) & (w < 1))
        np.testing.assert_array_equal(w, make_rng(4).random(3))

    def test_explicit_w0(self, rng):
        game = make_random_game(rng)
        opponent = min_vi(0.5, w0=[1.0, 2.0, 3.0])
        opponent.bind(game, rng)
        np.testing.assert_array_equal(opponent.value, [1.0, 2.0, 3.0])

    def test_w0_length_checked(self, rng):
        with pytest.raises(DimensionMismatchError):
            min_vi(0.5, w0=[1.0]).bind(make_random_game(rng), rng)

    def test_rebind_resets_value(self):
        game = make_one_state_game(coupling=(0.0, 0.0))
        opponent = min_vi(0.9)
        opponent.bind(game, make_rng(0))
        opponent.respond(PLAY_0)
        opponent.bind(game, make_rng(0))
        np.testing.assert_array_equal(opponent.value, [0.0])


class TestFixedOpponent:
    def test_idempotent(self, rng):
        game = make_random_game(rng)
        policy = Policy.deterministic([1, 0, 1], 2)
        opponent = FixedOpponent(policy)
        opponent.bind(game, rng)
        assert opponent.initial_policy() is policy
        for pi1 in (Policy.uniform(3, 2), Policy.deterministic([0, 0, 0], 2)):
            assert opponent.respond(pi1) is policy
        assert opponent.value is None

    def test_shape_checked_on_bind(self, rng):
        with pytest.raises(DimensionMismatchError):
            FixedOpponent(PLAY_0).bind(make_random_game(rng), rng)


class TestUniformRandomOpponent:
    def test_deterministic_policies(self, rng):
        game = make_random_game(rng, num_states=5, num_actions=3)
        opponent = UniformRandomOpponent(seed=1)
        opponent.bind(game, rng)
        for _ in range(10):
            assert opponent.respond(Policy.uniform(5, 3)).is_deterministic

    def test_own_seed_is_reproducible(self, rng):
        game = make_random_game(rng, num_states=5, num_actions=3)
        draws = []
        for run_seed in (1, 2):
            opponent = uniform_random(seed=7)
            opponent.bind(game, make_rng(run_seed))
            draws.append([opponent.respond(Policy.uniform(5, 3)).actions for _ in range(5)])
        np.testing.assert_array_equal(np.stack(draws[0]), np.stack(draws[1]))

    def test_covers_all_actions(self, rng):
        game = make_random_game(rng, num_states=1, num_actions=3)
        opponent = uniform_random()
        opponent.bind(game, make_rng(3))
        seen = {int(opponent.respond(Policy.uniform(1, 3)).actions[0]) for _ in range(100)}
        assert seen == {0, 1, 2}

    def test_unbound_use_rejected(self):
        with pytest.raises(InvalidParameterError):
            uniform_random().respond(PLAY_0)
