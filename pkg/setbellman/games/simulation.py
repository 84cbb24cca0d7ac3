"""Two-player value iteration on single-controller games, plus containment reporting.

Each iteration player one takes a Bellman step against the cost induced by player two's
current policy, and player two answers through its `OpponentStrategy`. Alongside, the
interval iterate over the game's cost over-approximation is advanced from the degenerate
box at V^0, so V^k ∈ 𝒱^k can be checked at every k.

Usage:
    traj = two_player_vi(game, min_vi(0.7), v0=np.zeros(game.num_states), num_iters=100, seed=1)
    report = containment_report(traj, traj.fixed_box)
    report.passed
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from setbellman.common.config import get_settings
from setbellman.common.exceptions import InvalidParameterError, SetBellmanError
from setbellman.common.logging import get_logger
from setbellman.common.metrics import CONTAINMENT_VIOLATIONS_TOTAL, VALUE_ITERATIONS_TOTAL
from setbellman.common.rng import make_rng
from setbellman.games.exceptions import OpponentStrategyError
from setbellman.games.game import (
    SingleControllerGame,
    interval_over_approx,
    player_one_cost,
    player_one_mdp,
)
from setbellman.games.opponents import OpponentStrategy
from setbellman.intervals.arithmetic import IntervalVector
from setbellman.intervals.hausdorff import point_to_box_distance
from setbellman.mdp.bellman import bellman_apply, greedy_policy, value_iteration
from setbellman.mdp.model import Mdp, Policy, as_value_function
from setbellman.setvi.operator import IntervalMdp, fixed_point_box, set_bellman_apply

logger = get_logger("GAME")


def game_interval_mdp(game: SingleControllerGame) -> IntervalMdp:
    """Player one's MDP family: shared kernel, cost box from `interval_over_approx`, γ₁."""
    return IntervalMdp(game.kernel, interval_over_approx(game), game.discount_p1)


@dataclass
class GameTrajectory:
    """Everything recorded by `two_player_vi`.

    values, policies_p1, policies_p2, boxes and distances hold one entry per iterate
    k = 0..N. costs[k] is the cost C¹(π₂^k) used to go from V^k to V^{k+1}, so it has N
    entries. opponent_values holds W^k when the opponent runs value iteration.
    """

    fixed_box: IntervalVector
    opponent_kind: str
    values: list[np.ndarray] = field(default_factory=list)
    policies_p1: list[Policy] = field(default_factory=list)
    policies_p2: list[Policy] = field(default_factory=list)
    boxes: list[IntervalVector] = field(default_factory=list)
    distances: list[float] = field(default_factory=list)
    costs: list[np.ndarray] = field(default_factory=list)
    opponent_values: list[np.ndarray] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.values)

    def record(
        self,
        v: np.ndarray,
        box: IntervalVector,
        pi1: Policy,
        pi2: Policy,
        w: np.ndarray | None,
    ) -> None:
        self.values.append(v)
        self.boxes.append(box)
        self.policies_p1.append(pi1)
        self.policies_p2.append(pi2)
        self.distances.append(point_to_box_distance(v, self.fixed_box))
        if w is not None:
            self.opponent_values.append(w)

    def contained(self, tol: float | None = None) -> list[bool]:
        tol = get_settings().containment_tol if tol is None else tol
        return [box.contains(v, tol) for v, box in zip(self.values, self.boxes, strict=True)]

    def rows(self, tol: float | None = None) -> list[dict]:
        """Long-format rows (iter, state) for the trajectory CSV."""
        flags = self.contained(tol)
        out = []
        for k, (v, box, dist, ok) in enumerate(
            zip(self.values, self.boxes, self.distances, flags, strict=True)
        ):
            for s in range(v.shape[0]):
                out.append(
                    {
                        "iter": k,
                        "state": s,
                        "v": float(v[s]),
                        "box_lo": float(box.lo[s]),
                        "box_hi": float(box.hi[s]),
                        "contained": int(ok),
                        "dist_to_fixed_box": dist,
                        "opponent_kind": self.opponent_kind,
                    }
                )
        return out


def two_player_vi(
    game: SingleControllerGame,
    opponent: OpponentStrategy,
    v0,
    num_iters: int,
    seed: int | None = None,
    fixed_box: IntervalVector | None = None,
    epsilon: float | None = None,
) -> GameTrajectory:
    """Run two-player value iteration for `num_iters` iterations.

    Both players start on action 0 in every state. Iteration k:
    C = C¹(π₂^k); V^{k+1} = f_C(V^k); π₁^{k+1} = greedy(C, V^k); π₂^{k+1} = g(π₁^{k+1}).

    Args:
        game: The single-controller game.
        opponent: Player two's response strategy; bound to the game here.
        v0: Player one's initial value function.
        num_iters: Number of iterations (N ≥ 1).
        seed: Seed for the run generator (uniform W init, unseeded random opponents).
        fixed_box: Fixed-point box of the cost over-approximation; computed when omitted.
        epsilon: Accuracy for computing `fixed_box`.

    Raises:
        OpponentStrategyError: The opponent failed; the partial trajectory is attached.
    """
    if num_iters < 1:
        raise InvalidParameterError("num_iters must be >= 1", context={"num_iters": num_iters})
    imdp = game_interval_mdp(game)
    if fixed_box is None:
        fixed_box = fixed_point_box(imdp, epsilon)
    rng = make_rng(seed)

    v = as_value_function(v0, game.num_states)
    box = IntervalVector.degenerate(v)
    pi1 = Policy.deterministic(np.zeros(game.num_states, dtype=int), game.actions_p1)
    try:
        opponent.bind(game, rng)
        pi2 = opponent.initial_policy()
    except SetBellmanError:
        raise
    except Exception as exc:
        raise OpponentStrategyError(
            "Opponent failed to initialize", context={"kind": opponent.kind, "error": str(exc)}
        ) from exc

    traj = GameTrajectory(fixed_box=fixed_box, opponent_kind=opponent.kind)
    traj.record(v, box, pi1, pi2, opponent.value)

    for k in range(num_iters):
        mdp = Mdp(game.kernel, player_one_cost(game, pi2), game.discount_p1)
        pi1 = greedy_policy(mdp, v)
        v = bellman_apply(mdp, v)
        box = set_bellman_apply(imdp, box)
        traj.costs.append(mdp.cost)
        try:
            pi2 = opponent.respond(pi1)
        except Exception as exc:
            logger.error(
                "Opponent strategy failed",
                extra={"data": {"kind": opponent.kind, "iteration": k, "error": str(exc)}},
            )
            raise OpponentStrategyError(
                "Opponent strategy failed",
                context={"kind": opponent.kind, "iteration": k},
                trajectory=traj,
            ) from exc
        traj.record(v, box, pi1, pi2, opponent.value)

    VALUE_ITERATIONS_TOTAL.labels(solver="two_player_vi").inc(num_iters)
    flags = traj.contained()
    violations = flags.count(False)
    if violations:
        CONTAINMENT_VIOLATIONS_TOTAL.inc(violations)
        logger.warning(
            "Game trajectory left its interval iterate",
            extra={"data": {"opponent": opponent.kind, "violations": violations}},
        )
    logger.debug(
        "Two-player value iteration finished",
        extra={"data": {"opponent": opponent.kind, "iterations": num_iters, "seed": seed}},
    )
    return traj


# ─── Reports ───


@dataclass(frozen=True)
class ContainmentReport:
    """Per-iteration containment flags and tail distance to the fixed-point box."""

    contained: list[bool]
    first_violation: int | None
    tail_distance: float
    tail_tol: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "all_contained": all(self.contained),
            "first_violation": self.first_violation,
            "tail_distance": self.tail_distance,
            "tail_tol": self.tail_tol,
            "passed": self.passed,
        }


def containment_report(
    traj: GameTrajectory,
    fixed_box: IntervalVector,
    tol: float | None = None,
    tail_fraction: float | None = None,
    tail_tol: float | None = None,
) -> ContainmentReport:
    """Check V^k ∈ 𝒱^k for every k and the tail distance of V^k to `fixed_box`.

    Works on any record exposing `values` and `boxes` (game or cost-sampled trajectory).
    Never raises for a failed check; `passed` carries the verdict.
    """
    settings = get_settings()
    tol = settings.containment_tol if tol is None else tol
    tail_fraction = settings.tail_fraction if tail_fraction is None else tail_fraction
    tail_tol = settings.tail_distance_tol if tail_tol is None else tail_tol
    if not traj.values:
        raise InvalidParameterError("Trajectory is empty")

    flags = [box.contains(v, tol) for v, box in zip(traj.values, traj.boxes, strict=True)]
    first = flags.index(False) if not all(flags) else None
    distances = [point_to_box_distance(v, fixed_box) for v in traj.values]
    n = max(1, int(np.ceil(len(distances) * tail_fraction)))
    tail = float(max(distances[-n:]))
    return ContainmentReport(
        contained=flags,
        first_violation=first,
        tail_distance=tail,
        tail_tol=tail_tol,
        passed=first is None and tail <= tail_tol,
    )


@dataclass(frozen=True)
class NashContainmentResult:
    """Fixed points of f_{C¹(π₂)} for each opponent policy and their distance to the box."""

    values: list[np.ndarray]
    distances: list[float]
    contained: bool


def nash_containment_check(
    game: SingleControllerGame,
    pi2_list: list[Policy],
    box: IntervalVector,
    epsilon: float | None = None,
) -> NashContainmentResult:
    """Solve player one's MDP for each fixed opponent policy and test membership in `box`.

    Every Nash value of player one is such a fixed point, so membership for all π₂ tested
    is the checkable surrogate for Nash containment. Both the fixed points and the box
    are ε-accurate, so membership is tested with tolerance ε.
    """
    epsilon = get_settings().default_epsilon if epsilon is None else epsilon
    zeros = np.zeros(game.num_states)
    values, distances = [], []
    for pi2 in pi2_list:
        result = value_iteration(player_one_mdp(game, pi2), zeros, epsilon=epsilon)
        values.append(result.values)
        distances.append(point_to_box_distance(result.values, box))
    contained = all(d <= epsilon for d in distances)
    if not contained:
        logger.warning(
            "Opponent-induced fixed point outside the box",
            extra={"data": {"max_distance": max(distances)}},
        )
    return NashContainmentResult(values=values, distances=distances, contained=contained)


@dataclass(frozen=True)
class LimitCycleReport:
    """Outcome of the tail periodicity test on player one's value trajectory.

    Attributes:
        detected: The tail keeps moving yet repeats with some period ≥ 2.
        period: Smallest such period, when detected.
        amplitude: Largest successive step ‖V^{k+1} − V^k‖∞ over the tail.
    """

    detected: bool
    period: int | None
    amplitude: float


def limit_cycle_detected(
    traj: GameTrajectory,
    tol: float = 1e-6,
    fraction: float = 0.25,
    max_period: int | None = None,
) -> LimitCycleReport:
    """Detect a non-convergent periodic tail in player one's values.

    The tail is the last `fraction` of iterates. It counts as a limit cycle when its
    successive steps exceed `tol` while V^{k+p} matches V^k within `tol` across the tail
    for some p in [2, max_period].
    """
    values = np.stack(traj.values)
    n = max(4, int(np.ceil(len(values) * fraction)))
    tail = values[-n:]
    if tail.shape[0] < 4:
        return LimitCycleReport(detected=False, period=None, amplitude=0.0)
    amplitude = float(np.max(np.abs(np.diff(tail, axis=0))))
    if amplitude <= tol:
        return LimitCycleReport(detected=False, period=None, amplitude=amplitude)
    max_period = tail.shape[0] // 2 if max_period is None else min(max_period, tail.shape[0] // 2)
    for p in range(2, max_period + 1):
        if np.max(np.abs(tail[p:] - tail[:-p])) <= tol:
            return LimitCycleReport(detected=True, period=p, amplitude=amplitude)
    return LimitCycleReport(detected=False, period=None, amplitude=amplitude)
