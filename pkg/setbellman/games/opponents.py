"""Opponent (player two) response strategies for two-player value iteration.

A strategy maps player one's latest policy π₁ to player two's next policy π₂. Value-iteration
opponents keep their own value function W and take one Bellman step per call on the MDP
they face given π₁: cost C²(π₁), kernel P²(π₁), discount γ₂.

Usage:
    opponent = min_vi(gamma=0.7)
    opponent.bind(game, rng)
    pi2 = opponent.initial_policy()
    pi2 = opponent.respond(pi1)
"""

from __future__ import annotations

from dataclasses import replace
from typing import Literal, Protocol

import numpy as np

from setbellman.common.exceptions import DimensionMismatchError, InvalidParameterError
from setbellman.common.rng import make_rng
from setbellman.games.game import SingleControllerGame, player_two_mdp
from setbellman.mdp.bellman import greedy_policy, q_values
from setbellman.mdp.model import Policy

OpponentKind = Literal["min_vi", "max_vi", "fixed", "uniform_random"]
InitKind = Literal["zeros", "uniform"]


class OpponentStrategy(Protocol):
    """The response map g: π₁ ↦ π₂ used by two-player value iteration."""

    kind: str

    def bind(self, game: SingleControllerGame, rng: np.random.Generator) -> None:
        """Attach to a game before the first iteration; resets internal state."""

    def initial_policy(self) -> Policy: ...

    def respond(self, pi1: Policy) -> Policy: ...

    @property
    def value(self) -> np.ndarray | None:
        """Player two's current value function W, when it keeps one."""


def _check_gamma(gamma: float) -> float:
    if not 0.0 < gamma < 1.0:
        raise InvalidParameterError(
            "Opponent discount must lie in (0, 1)", context={"gamma": gamma}
        )
    return float(gamma)


def _first_action(game: SingleControllerGame) -> Policy:
    return Policy.deterministic(np.zeros(game.num_states, dtype=int), game.actions_p2)


class ValueIterationOpponent:
    """Player two running value iteration, minimizing or maximizing its own cost.

    Ties go to the lowest action index in both directions.
    """

    def __init__(
        self,
        gamma: float,
        maximize: bool = False,
        init: InitKind = "zeros",
        w0=None,
    ) -> None:
        self.gamma = _check_gamma(gamma)
        self.maximize = maximize
        self.kind = "max_vi" if maximize else "min_vi"
        if init not in ("zeros", "uniform"):
            raise InvalidParameterError("Unknown opponent init", context={"init": init})
        self.init = init
        self._w0 = None if w0 is None else np.asarray(w0, dtype=float)
        self._w: np.ndarray | None = None
        self._game: SingleControllerGame | None = None

    def bind(self, game: SingleControllerGame, rng: np.random.Generator) -> None:
        # The opponent's own discount overrides the game's discount_p2.
        if self.gamma != game.discount_p2:
            game = replace(game, discount_p2=self.gamma)
        self._game = game
        if self._w0 is not None:
            if self._w0.shape != (game.num_states,):
                raise DimensionMismatchError(
                    "Opponent w0 has the wrong length",
                    context={"expected": game.num_states, "got": list(self._w0.shape)},
                )
            self._w = self._w0.copy()
        elif self.init == "uniform":
            self._w = rng.random(game.num_states)
        else:
            self._w = np.zeros(game.num_states)

    @property
    def value(self) -> np.ndarray | None:
        return None if self._w is None else self._w.copy()

    def initial_policy(self) -> Policy:
        return _first_action(self._require_game())

    def respond(self, pi1: Policy) -> Policy:
        game = self._require_game()
        mdp = player_two_mdp(game, pi1)
        if not self.maximize:
            policy = greedy_policy(mdp, self._w)
            self._w = q_values(mdp, self._w).min(axis=1)
            return policy
        q = q_values(mdp, self._w)
        self._w = q.max(axis=1)
        return Policy.deterministic(np.argmax(q, axis=1), game.actions_p2)

    def _require_game(self) -> SingleControllerGame:
        if self._game is None:
            raise InvalidParameterError("Opponent used before bind()")
        return self._game


class FixedOpponent:
    """Always plays the same policy."""

    kind = "fixed"

    def __init__(self, policy: Policy) -> None:
        self.policy = policy

    def bind(self, game: SingleControllerGame, rng: np.random.Generator) -> None:
        if self.policy.probs.shape != (game.num_states, game.actions_p2):
            raise DimensionMismatchError(
                "Fixed opponent policy does not match the game",
                context={"shape": list(self.policy.probs.shape)},
            )

    @property
    def value(self) -> None:
        return None

    def initial_policy(self) -> Policy:
        return self.policy

    def respond(self, pi1: Policy) -> Policy:
        return self.policy


class UniformRandomOpponent:
    """Plays an independent, uniformly drawn deterministic policy at every step.

    With no seed of its own it draws from the run's generator.
    """

    kind = "uniform_random"

    def __init__(self, seed: int | None = None) -> None:
        self.seed = seed
        self._rng: np.random.Generator | None = None
        self._game: SingleControllerGame | None = None

    def bind(self, game: SingleControllerGame, rng: np.random.Generator) -> None:
        self._game = game
        self._rng = rng if self.seed is None else make_rng(self.seed)

    @property
    def value(self) -> None:
        return None

    def initial_policy(self) -> Policy:
        if self._game is None:
            raise InvalidParameterError("Opponent used before bind()")
        return _first_action(self._game)

    def respond(self, pi1: Policy) -> Policy:
        if self._game is None or self._rng is None:
            raise InvalidParameterError("Opponent used before bind()")
        actions = self._rng.integers(self._game.actions_p2, size=self._game.num_states)
        return Policy.deterministic(actions, self._game.actions_p2)


def min_vi(gamma: float, init: InitKind = "zeros", w0=None) -> ValueIterationOpponent:
    """Opponent minimizing its discounted cost by value iteration."""
    return ValueIterationOpponent(gamma, maximize=False, init=init, w0=w0)


def max_vi(gamma: float, init: InitKind = "zeros", w0=None) -> ValueIterationOpponent:
    """Opponent maximizing its discounted cost by value iteration."""
    return ValueIterationOpponent(gamma, maximize=True, init=init, w0=w0)


def fixed(policy: Policy) -> FixedOpponent:
    return FixedOpponent(policy)


def uniform_random(seed: int | None = None) -> UniformRandomOpponent:
    return UniformRandomOpponent(seed)
