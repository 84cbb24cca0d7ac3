"""Pydantic schemas for every JSON file the CLI reads or writes.

Matrices are nested lists in row-major order. A kernel is S rows of S·A entries, entry
[s_next][s * A + a]; cost matrices are S rows of A entries.

RULES:
- Schemas only check JSON shape and scalar ranges. Model invariants (column sums, interval
  order, tensor shapes) are enforced by the value objects the `to_*` methods build.
- Every `to_*` method returns numpy-backed value objects, never dicts.
"""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from setbellman.common.exceptions import DimensionMismatchError, SpecValidationError
from setbellman.games import opponents
from setbellman.games.game import SingleControllerGame
from setbellman.grid.generator import GridSpec
from setbellman.intervals.arithmetic import IntervalMatrix
from setbellman.mdp.model import Mdp, Policy, validate_mdp
from setbellman.setvi.operator import IntervalMdp

Matrix = list[list[float]]
Tensor3 = list[list[list[float]]]
OpponentKindName = Literal["min_vi", "max_vi", "fixed", "uniform_random"]
CouplingFormName = Literal["additive", "matching"]


class _Spec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    meta: dict | None = None  # provenance header written by the CLI; ignored on load


class _ModelSpec(_Spec):
    """Header shared by the MDP, interval MDP and game files.

    `num_states` and `num_actions` (player one's actions for games) are optional; when present
    they must agree with the matrices.
    """

    num_states: int | None = Field(default=None, ge=1)
    num_actions: int | None = Field(default=None, ge=1)

    def check_dimensions(self, num_states: int, num_actions: int) -> None:
        for name, declared, actual in (
            ("num_states", self.num_states, num_states),
            ("num_actions", self.num_actions, num_actions),
        ):
            if declared is not None and declared != actual:
                raise DimensionMismatchError(
                    f"{name} is {declared} but the matrices give {actual}",
                    context={"field": name, "declared": declared, "actual": actual},
                )


# ─── MDP Schemas ───


class MdpSpec(_ModelSpec):
    """A single finite discounted MDP."""

    kernel: Matrix
    cost: Matrix
    discount: float = Field(gt=0.0, lt=1.0)
    policy: list[int] | None = None  # optional deterministic policy (certify mode)

    def to_mdp(self, check: bool = True) -> Mdp:
        """Build the `Mdp`; with `check`, reject kernels failing `validate_mdp`."""
        mdp = Mdp(self.kernel, self.cost, self.discount)
        self.check_dimensions(mdp.num_states, mdp.num_actions)
        if check:
            report = validate_mdp(mdp)
            if report:
                raise SpecValidationError("Invalid MDP", context={"violations": report})
        return mdp

    @classmethod
    def from_mdp(cls, mdp: Mdp) -> MdpSpec:
        return cls(
            num_states=mdp.num_states,
            num_actions=mdp.num_actions,
            kernel=mdp.kernel.tolist(),
            cost=mdp.cost.tolist(),
            discount=mdp.discount,
        )


class IntervalMdpSpec(_ModelSpec):
    """An MDP family: shared kernel and discount, costs given by a box or a finite list.

    With `costs`, the box is their interval hull and the list drives finite sampling.
    """

    kernel: Matrix
    discount: float = Field(gt=0.0, lt=1.0)
    cost_lo: Matrix | None = None
    cost_hi: Matrix | None = None
    costs: list[Matrix] | None = None
    policy: list[int] | None = None

    @model_validator(mode="after")
    def _box_or_list(self) -> IntervalMdpSpec:
        has_box = self.cost_lo is not None and self.cost_hi is not None
        if not has_box and not self.costs:
            msg = "Provide either cost_lo and cost_hi, or a non-empty costs list"
            raise ValueError(msg)
        if (self.cost_lo is None) != (self.cost_hi is None):
            msg = "cost_lo and cost_hi must be given together"
            raise ValueError(msg)
        return self

    def to_interval_mdp(self, check: bool = True) -> IntervalMdp:
        if self.cost_lo is not None and self.cost_hi is not None:
            box = IntervalMatrix(self.cost_lo, self.cost_hi)
            imdp = IntervalMdp(self.kernel, box, self.discount)
            if self.costs:
                for i, c in enumerate(self.cost_list()):
                    if not imdp.cost_box.contains(c):
                        raise SpecValidationError(
                            "Listed cost lies outside cost_lo/cost_hi", context={"index": i}
                        )
        else:
            imdp = IntervalMdp.from_costs(self.kernel, self.cost_list(), self.discount)
        self.check_dimensions(imdp.num_states, imdp.num_actions)
        if check:
            report = imdp.validate()
            if report:
                raise SpecValidationError("Invalid interval MDP", context={"violations": report})
        return imdp

    def cost_list(self) -> list[np.ndarray] | None:
        if not self.costs:
            return None
        return [np.asarray(c, dtype=float) for c in self.costs]


# ─── Game Schemas ───


class OpponentSpec(_Spec):
    """Player two's strategy and its parameters."""

    kind: OpponentKindName = "min_vi"
    gamma: float | None = Field(default=None, gt=0.0, lt=1.0)
    init: Literal["zeros", "uniform"] = "zeros"
    policy: list[int] | None = None  # fixed: one action per state
    seed: int | None = None  # uniform_random: own seed, else the run seed

    @model_validator(mode="after")
    def _required_fields(self) -> OpponentSpec:
        if self.kind == "fixed" and self.policy is None:
            msg = "Opponent kind 'fixed' requires 'policy'"
            raise ValueError(msg)
        return self

    def to_strategy(self, game: SingleControllerGame) -> opponents.OpponentStrategy:
        """Opponent strategy object; VI opponents default to the game's discount_p2."""
        gamma = game.discount_p2 if self.gamma is None else self.gamma
        if self.kind == "min_vi":
            return opponents.min_vi(gamma, init=self.init)
        if self.kind == "max_vi":
            return opponents.max_vi(gamma, init=self.init)
        if self.kind == "fixed":
            return opponents.fixed(Policy.deterministic(self.policy, game.actions_p2))
        return opponents.uniform_random(self.seed)


class GameSpec(_ModelSpec):
    """A single-controller game, in C/J coupled form or as explicit cost tensors."""

    kernel: Matrix
    discount: float = Field(gt=0.0, lt=1.0)
    discount_p2: float = Field(gt=0.0, lt=1.0)
    cost: Matrix | None = None
    coupling: Matrix | None = None
    coupling_form: CouplingFormName = "additive"
    d1: Tensor3 | None = None
    d2: Tensor3 | None = None
    opponent: OpponentSpec = Field(default_factory=OpponentSpec)

    @model_validator(mode="after")
    def _coupled_or_tensor(self) -> GameSpec:
        coupled = self.cost is not None and self.coupling is not None
        tensor = self.d1 is not None and self.d2 is not None
        if coupled == tensor:
            msg = "Provide exactly one of (cost, coupling) or (d1, d2)"
            raise ValueError(msg)
        return self

    def to_game(self, check: bool = True) -> SingleControllerGame:
        if self.cost is not None:
            game = SingleControllerGame.from_coupling(
                self.kernel,
                self.cost,
                self.coupling,
                self.discount,
                self.discount_p2,
                form=self.coupling_form,
            )
        else:
            game = SingleControllerGame(
                kernel=self.kernel,
                d1=self.d1,
                d2=self.d2,
                discount_p1=self.discount,
                discount_p2=self.discount_p2,
            )
        self.check_dimensions(game.num_states, game.actions_p1)
        if check:
            report = game.validate()
            if report:
                raise SpecValidationError("Invalid game", context={"violations": report})
        return game

    @classmethod
    def from_game(
        cls, game: SingleControllerGame, opponent: OpponentSpec | None = None
    ) -> GameSpec:
        fields = {
            "num_states": game.num_states,
            "num_actions": game.actions_p1,
            "kernel": game.kernel.tolist(),
            "discount": game.discount_p1,
            "discount_p2": game.discount_p2,
            "opponent": opponent or OpponentSpec(),
        }
        if game.base_cost is not None and game.coupling is not None:
            fields |= {
                "cost": game.base_cost.tolist(),
                "coupling": game.coupling.tolist(),
                "coupling_form": game.coupling_form,
            }
        else:
            fields |= {"d1": game.d1.tolist(), "d2": game.d2.tolist()}
        return cls(**fields)


# ─── Grid Schema ───


class GridSpecModel(_Spec):
    """Parameters of a generated grid world."""

    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    stick_prob: float = Field(default=0.7, gt=0.0, le=1.0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    discount: float = Field(default=0.7, gt=0.0, lt=1.0)
    discount_p2: float = Field(default=0.7, gt=0.0, lt=1.0)
    coupling_form: CouplingFormName = "matching"

    def to_grid_spec(self) -> GridSpec:
        return GridSpec(rows=self.rows, cols=self.cols, stick_prob=self.stick_prob, seed=self.seed)
