"""Two-player single-controller stochastic games.

Player one controls the transition kernel; player two only moves costs. Costs are held as
tensors ``d1[s, a, b]`` (player one's cost for joint action (a, b)) and ``d2[s, b, a]``
(player two's cost), so both the coupled C/J forms and arbitrary cost tensors fit.

Coupled forms, with base cost C and non-negative coupling J:

- ``additive``: d1[s, a, b] = C[s, a] + J[s, b],  d2[s, b, a] = C[s, b] − J[s, a]
- ``matching``: player one pays J[s, a] only when player two plays the same action,
  d1[s, a, b] = C[s, a] + J[s, a]·[a = b],  d2[s, b, a] = C[s, b] − J[s, b]·[a = b]
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from setbellman.common.exceptions import (
    DimensionMismatchError,
    InvalidParameterError,
    check_shape,
)
from setbellman.intervals.arithmetic import IntervalMatrix
from setbellman.mdp.model import Mdp, Policy, validate_mdp

CouplingForm = Literal["additive", "matching"]


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class SingleControllerGame:
    """Shared kernel P (player one controlled), cost tensors and per-player discounts."""

    kernel: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    discount_p1: float
    discount_p2: float
    base_cost: np.ndarray | None = None
    coupling: np.ndarray | None = None
    coupling_form: str = "tensor"

    def __post_init__(self) -> None:
        d1, d2 = _frozen(self.d1), _frozen(self.d2)
        if d1.ndim != 3:
            raise DimensionMismatchError(
                "d1 must be an S×A1×A2 tensor", context={"shape": list(d1.shape)}
            )
        s, a1, a2 = d1.shape
        check_shape("d2", d2, (s, a2, a1))
        # Mdp checks the kernel shape against (S, S·A1).
        mdp = Mdp(self.kernel, np.zeros((s, a1)), self.discount_p1)
        for name, gamma in (("discount_p1", self.discount_p1), ("discount_p2", self.discount_p2)):
            if not 0.0 < float(gamma) < 1.0:
                raise InvalidParameterError(f"{name} must lie in (0, 1)", context={name: gamma})
        object.__setattr__(self, "kernel", mdp.kernel)
        object.__setattr__(self, "d1", d1)
        object.__setattr__(self, "d2", d2)
        object.__setattr__(self, "discount_p1", float(self.discount_p1))
        object.__setattr__(self, "discount_p2", float(self.discount_p2))
        if self.base_cost is not None:
            object.__setattr__(self, "base_cost", _frozen(self.base_cost))
        if self.coupling is not None:
            object.__setattr__(self, "coupling", _frozen(self.coupling))

    @classmethod
    def from_coupling(
        cls,
        kernel,
        base_cost,
        coupling,
        discount_p1: float,
        discount_p2: float,
        form: CouplingForm = "additive",
    ) -> SingleControllerGame:
        """Materialize the cost tensors of a C/J coupled game (A1 = A2 = A)."""
        c = np.asarray(base_cost, dtype=float)
        j = np.asarray(coupling, dtype=float)
        if c.ndim != 2:
            raise DimensionMismatchError("base_cost must be S×A", context={"shape": list(c.shape)})
        check_shape("coupling", j, c.shape)
        if np.any(j < 0):
            raise InvalidParameterError("coupling J must be entrywise non-negative")

        if form == "additive":
            d1 = c[:, :, None] + j[:, None, :]
            d2 = c[:, :, None] - j[:, None, :]
        elif form == "matching":
            same = np.eye(c.shape[1])[None, :, :]
            d1 = c[:, :, None] + (j[:, :, None] * same)
            d2 = c[:, :, None] - (j[:, :, None] * same)
        else:
            raise InvalidParameterError("Unknown coupling form", context={"form": form})
        return cls(
            kernel=kernel,
            d1=d1,
            d2=d2,
            discount_p1=discount_p1,
            discount_p2=discount_p2,
            base_cost=c,
            coupling=j,
            coupling_form=form,
        )

    @property
    def num_states(self) -> int:
        return self.d1.shape[0]

    @property
    def actions_p1(self) -> int:
        return self.d1.shape[1]

    @property
    def actions_p2(self) -> int:
        return self.d1.shape[2]

    def validate(self) -> list[str]:
        """Kernel/discount violations (player one's MDP view) plus coupling sign."""
        view = Mdp(self.kernel, np.zeros((self.num_states, self.actions_p1)), self.discount_p1)
        report = validate_mdp(view)
        if self.coupling is not None and np.any(self.coupling < 0):
            report.append("coupling J has negative entries")
        return report


def _check_policy(name: str, policy: Policy, shape: tuple[int, int]) -> None:
    check_shape(name, policy.probs, shape)


def player_one_cost(game: SingleControllerGame, pi2: Policy) -> np.ndarray:
    """C¹(π₂)[s, a] = Σ_b π₂(s, b)·d1[s, a, b]."""
    _check_policy("pi2", pi2, (game.num_states, game.actions_p2))
    return np.einsum("sab,sb->sa", game.d1, pi2.probs)


def player_two_cost(game: SingleControllerGame, pi1: Policy) -> np.ndarray:
    """C²(π₁)[s, b] = Σ_a π₁(s, a)·d2[s, b, a]."""
    _check_policy("pi1", pi1, (game.num_states, game.actions_p1))
    return np.einsum("sba,sa->sb", game.d2, pi1.probs)


def player_one_kernel(game: SingleControllerGame, pi2: Policy) -> np.ndarray:
    """P¹(π₂); player two does not move the state, so this is P for every π₂."""
    _check_policy("pi2", pi2, (game.num_states, game.actions_p2))
    return game.kernel.copy()


def player_two_kernel(game: SingleControllerGame, pi1: Policy) -> np.ndarray:
    """P²(π₁)[s', (s, b)] = Σ_a π₁(s, a)·P[s', (s, a)], identical for every b."""
    _check_policy("pi1", pi1, (game.num_states, game.actions_p1))
    s, a1, a2 = game.num_states, game.actions_p1, game.actions_p2
    blocks = game.kernel.reshape(s, s, a1)  # [s', s, a]
    chain = np.einsum("tsa,sa->ts", blocks, pi1.probs)
    return np.repeat(chain, a2, axis=1)


def interval_over_approx(game: SingleControllerGame) -> IntervalMatrix:
    """Entrywise [min_b d1[s, a, b], max_b d1[s, a, b]]; contains C¹(π₂) for every π₂."""
    return IntervalMatrix(game.d1.min(axis=2), game.d1.max(axis=2))


def player_one_mdp(game: SingleControllerGame, pi2: Policy) -> Mdp:
    return Mdp(player_one_kernel(game, pi2), player_one_cost(game, pi2), game.discount_p1)


def player_two_mdp(game: SingleControllerGame, pi1: Policy) -> Mdp:
    return Mdp(player_two_kernel(game, pi1), player_two_cost(game, pi1), game.discount_p2)
