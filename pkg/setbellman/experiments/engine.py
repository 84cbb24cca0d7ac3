"""Experiment engine: dispatch one `ExperimentConfig` to the solvers and write artifacts.

The engine is synchronous; sweeps parallelize across configs in `sweep.py`. Every run
writes ``<out>/<stem>.result.json``, failed runs included, so a non-converged or invalid
run still leaves a record with its exit code and a "converged" marker.

Exit codes: 0 success, 2 invalid input or config, 1 runtime failure or non-convergence.

Usage:
    from setbellman.experiments.engine import run

    result = run(ExperimentConfig(mode="solve", input=Path("toy.json")))
    result.exit_code
"""

from __future__ import annotations

import json
import time
from collections.abc import Callable
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import ValidationError

from setbellman.common.exceptions import (
    ConvergenceError,
    SetBellmanError,
    SpecValidationError,
)
from setbellman.common.logging import get_logger
from setbellman.common.metrics import RUN_DURATION_SECONDS
from setbellman.common.rng import make_rng, spawn_seeds
from setbellman.common.schemas import GameSpec, IntervalMdpSpec, MdpSpec
from setbellman.experiments.artifacts import provenance, write_csv, write_json
from setbellman.experiments.exceptions import ConfigError, ExperimentError
from setbellman.experiments.schemas import ExperimentConfig, RunResult
from setbellman.games.exceptions import OpponentStrategyError
from setbellman.games.simulation import (
    containment_report,
    game_interval_mdp,
    limit_cycle_detected,
    two_player_vi,
)
from setbellman.grid.generator import grid_game
from setbellman.intervals.arithmetic import IntervalVector
from setbellman.mdp.bellman import greedy_policy, value_iteration
from setbellman.mdp.certify import certify_interval_optimality
from setbellman.mdp.model import Mdp, Policy
from setbellman.setvi.operator import (
    IntervalMdp,
    fixed_point_box,
    inflate,
    set_value_iteration,
)
from setbellman.setvi.sampling import make_sampler, sampled_fixed_points
from setbellman.setvi.trajectory import random_cost_trajectory

logger = get_logger("EXPERIMENT")

SpecKind = Literal["mdp", "interval", "game"]


class _Outcome:
    """What a mode handler hands back to `run`."""

    def __init__(self, payload: dict, converged: bool | None = None) -> None:
        self.payload = payload
        self.converged = converged
        self.artifacts: list[Path] = []


# ─── Input ───


def read_spec(path: Path) -> dict:
    """Raw JSON object of an input spec file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ExperimentError("Cannot read input", context={"path": str(path)}) from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecValidationError(
            "Input is not valid JSON", context={"path": str(path), "error": str(exc)}
        ) from exc
    if not isinstance(raw, dict):
        raise SpecValidationError("Input must be a JSON object", context={"path": str(path)})
    return raw


def detect_kind(raw: dict) -> SpecKind:
    """Classify a spec by its fields: game, interval MDP family, or single MDP."""
    if {"coupling", "d1", "d2", "discount_p2"} & raw.keys():
        return "game"
    if {"cost_lo", "cost_hi", "costs"} & raw.keys():
        return "interval"
    return "mdp"


def _initial_values(config: ExperimentConfig, num_states: int, seed: int) -> np.ndarray:
    if config.init == "zeros":
        return np.zeros(num_states)
    # Child stream keeps V^0 independent of the draws made during the run.
    return make_rng(spawn_seeds(seed, 1)[0]).random(num_states)


# ─── Mode Handlers ───


def _run_validate(config: ExperimentConfig) -> _Outcome:
    raw = read_spec(config.input)
    kind = detect_kind(raw)
    if kind == "game":
        game = GameSpec.model_validate(raw).to_game()
        dims = {"num_states": game.num_states, "actions_p1": game.actions_p1}
    elif kind == "interval":
        imdp = IntervalMdpSpec.model_validate(raw).to_interval_mdp()
        dims = {"num_states": imdp.num_states, "num_actions": imdp.num_actions}
    else:
        mdp = MdpSpec.model_validate(raw).to_mdp()
        dims = {"num_states": mdp.num_states, "num_actions": mdp.num_actions}
    return _Outcome({"valid": True, "kind": kind, **dims})


def _run_solve(config: ExperimentConfig) -> _Outcome:
    mdp = MdpSpec.model_validate(read_spec(config.input)).to_mdp()
    result = value_iteration(
        mdp, np.zeros(mdp.num_states), epsilon=config.epsilon, max_iters=config.max_iters
    )
    policy = greedy_policy(mdp, result.values)
    payload = {
        "values": result.values,
        "policy": policy.actions,
        "iterations": result.iterations,
        "last_step": result.last_step,
        "epsilon": config.epsilon,
    }
    return _Outcome(payload, converged=result.converged)


def _run_set_solve(config: ExperimentConfig) -> _Outcome:
    spec = IntervalMdpSpec.model_validate(read_spec(config.input))
    imdp = spec.to_interval_mdp()
    solution = set_value_iteration(
        imdp,
        IntervalVector.degenerate(np.zeros(imdp.num_states)),
        epsilon=config.epsilon,
        max_iters=config.max_iters,
    )
    payload = {
        "box": solution.box.to_dict(),
        "inflated": solution.inflated.to_dict(),
        "certified_epsilon": solution.certified_epsilon,
        "iterations": solution.iterations,
        "last_step": solution.last_step,
        "epsilon": config.epsilon,
    }
    outcome = _Outcome(payload, converged=solution.converged)
    if config.num_samples == 0 and config.sampler != "finite-list":
        return outcome

    seed = config.seeds[0]
    costs = _sample_costs(config, spec, imdp)
    points = sampled_fixed_points(
        imdp, config.num_samples, seed, epsilon=config.epsilon, costs=costs
    )
    # Box and points are each within ε/2 of their exact counterparts.
    check = inflate(solution.box, config.epsilon)
    flags = [check.contains(p) for p in points.points]
    payload["samples"] = {
        "count": len(points),
        "sampler": config.sampler,
        "seed": seed,
        "all_contained": all(flags),
        "hull": IntervalVector.hull(points.points).to_dict(),
    }
    rows = [
        {"sample": i, "state": s, "value": float(p[s]), "contained": int(ok)}
        for i, (p, ok) in enumerate(zip(points.points, flags, strict=True))
        for s in range(points.dim)
    ]
    header = provenance(config.resolved(), seed)
    outcome.artifacts.append(
        write_csv(config.out / f"{config.stem}_samples.csv", rows, header)
    )
    return outcome


def _sample_costs(
    config: ExperimentConfig, spec: IntervalMdpSpec, imdp: IntervalMdp
) -> list[np.ndarray] | None:
    if config.sampler == "finite-list":
        if not spec.costs:
            raise ConfigError("sampler 'finite-list' needs a 'costs' list in the input spec")
        return spec.cost_list()
    if config.sampler == "vertex":
        return [imdp.cost_box.lo, imdp.cost_box.hi]
    return None


def _run_certify(config: ExperimentConfig) -> _Outcome:
    spec = IntervalMdpSpec.model_validate(read_spec(config.input))
    imdp = spec.to_interval_mdp()
    if spec.policy is not None:
        policy = Policy.deterministic(spec.policy, imdp.num_actions)
        source = "input"
    else:
        middle = imdp.mdp_at(0.5 * (imdp.cost_box.lo + imdp.cost_box.hi))
        result = value_iteration(
            middle, np.zeros(imdp.num_states), epsilon=config.epsilon, max_iters=config.max_iters
        )
        if not result.converged:
            raise ConvergenceError("Midpoint solve for the candidate policy did not converge")
        policy = greedy_policy(middle, result.values)
        source = "midpoint-greedy"
    cert = certify_interval_optimality(
        imdp.kernel, imdp.discount, policy, imdp.cost_box.lo, imdp.cost_box.hi
    )
    payload = {
        "policy": policy.actions,
        "policy_source": source,
        "certified": cert.certified,
        "endpoints_optimal": cert.endpoints_optimal,
        "worst_margin": cert.worst_margin,
        "worst_state_action": cert.worst_state_action,
        "lower": {"values": cert.lower.values, "residual": cert.lower.residual},
        "upper": {"values": cert.upper.values, "residual": cert.upper.residual},
    }
    return _Outcome(payload)


def _run_trajectory(config: ExperimentConfig) -> _Outcome:
    spec = IntervalMdpSpec.model_validate(read_spec(config.input))
    imdp = spec.to_interval_mdp()
    sampler = make_sampler(config.sampler, imdp, spec.cost_list())
    fixed_box = fixed_point_box(imdp, config.epsilon, config.max_iters)

    outcome = _Outcome({"fixed_box": fixed_box.to_dict(), "runs": {}}, converged=True)
    for seed in config.seeds:
        record = random_cost_trajectory(
            imdp,
            _initial_values(config, imdp.num_states, seed),
            config.num_steps,
            seed,
            sampler=sampler,
            fixed_box=fixed_box,
        )
        report = containment_report(record, fixed_box)
        outcome.payload["runs"][str(seed)] = report.to_dict()
        header = provenance(config.resolved(), seed)
        path = config.out / f"{config.stem}_seed{seed}.csv"
        outcome.artifacts.append(write_csv(path, record.rows(), header))
    return outcome


def _run_game_sim(config: ExperimentConfig) -> _Outcome:
    spec = GameSpec.model_validate(read_spec(config.input))
    game = spec.to_game()
    opponent_spec = config.opponent or spec.opponent
    fixed_box = fixed_point_box(game_interval_mdp(game), config.epsilon, config.max_iters)

    outcome = _Outcome(
        {"fixed_box": fixed_box.to_dict(), "opponent": opponent_spec.model_dump(), "runs": {}},
        converged=True,
    )
    for seed in config.seeds:
        header = provenance(config.resolved(), seed)
        path = config.out / f"{config.stem}_seed{seed}.csv"
        try:
            traj = two_player_vi(
                game,
                opponent_spec.to_strategy(game),
                _initial_values(config, game.num_states, seed),
                config.num_steps,
                seed=seed,
                fixed_box=fixed_box,
            )
        except OpponentStrategyError as exc:
            if exc.trajectory is not None:
                outcome.artifacts.append(write_csv(path, exc.trajectory.rows(), header))
            raise
        report = containment_report(traj, fixed_box)
        cycle = limit_cycle_detected(traj)
        outcome.payload["runs"][str(seed)] = {
            **report.to_dict(),
            "final_values": traj.values[-1],
            "limit_cycle": cycle.detected,
            "cycle_period": cycle.period,
            "tail_amplitude": cycle.amplitude,
        }
        outcome.artifacts.append(write_csv(path, traj.rows(), header))
    return outcome


def _run_grid_gen(config: ExperimentConfig) -> _Outcome:
    grid = config.grid
    game = grid_game(grid.to_grid_spec(), grid.discount, grid.discount_p2, grid.coupling_form)
    meta = provenance(config.resolved(), grid.seed)
    game_doc = GameSpec.from_game(game).model_copy(update={"meta": meta})
    mdp_doc = MdpSpec.from_mdp(Mdp(game.kernel, game.base_cost, game.discount_p1)).model_copy(
        update={"meta": meta}
    )
    outcome = _Outcome({"num_states": game.num_states, "num_actions": game.actions_p1})
    for suffix, doc in (("game", game_doc), ("mdp", mdp_doc)):
        path = config.out / f"{config.stem}.{suffix}.json"
        outcome.artifacts.append(write_json(path, doc.model_dump(mode="json", exclude_none=True)))
    return outcome


HANDLERS: dict[str, Callable[[ExperimentConfig], _Outcome]] = {
    "validate": _run_validate,
    "solve": _run_solve,
    "set-solve": _run_set_solve,
    "certify": _run_certify,
    "trajectory": _run_trajectory,
    "game-sim": _run_game_sim,
    "grid-gen": _run_grid_gen,
}


# ─── Entry Point ───


def exit_code_for(exc: BaseException) -> int:
    """2 for invalid input or config, 1 for everything else."""
    if isinstance(exc, SpecValidationError | ValidationError):
        return 2
    return 1


def run(config: ExperimentConfig, index: int = 0) -> RunResult:
    """Execute one experiment config and write its artifacts.

    Never raises for domain failures; the exit code and the result JSON carry them.
    """
    start = time.perf_counter()
    header = provenance(config.resolved(), config.seeds[0])
    result_path = config.out / f"{config.stem}.result.json"
    outcome: _Outcome | None = None
    error: str | None = None
    converged: bool | None = None
    try:
        outcome = HANDLERS[config.mode](config)
        converged = outcome.converged
        exit_code = 0 if converged is not False else 1
    except (SetBellmanError, ValidationError) as exc:
        exit_code = exit_code_for(exc)
        error = str(exc)
        if isinstance(exc, ConvergenceError | OpponentStrategyError):
            converged = False
        log = logger.warning if exit_code == 2 else logger.error
        log(
            "Run failed",
            extra={"data": {"mode": config.mode, "index": index, "error": error}},
        )

    document = {
        **header,
        "mode": config.mode,
        "exit_code": exit_code,
        "converged": converged,
        "result": outcome.payload if outcome is not None else None,
        "error": error,
    }
    artifacts = list(outcome.artifacts) if outcome is not None else []
    try:
        artifacts.append(write_json(result_path, document))
    except ExperimentError as exc:
        error = error or str(exc)
        exit_code = exit_code or 1

    duration = time.perf_counter() - start
    RUN_DURATION_SECONDS.labels(mode=config.mode).observe(duration)
    logger.info(
        "Run finished",
        extra={
            "data": {
                "mode": config.mode,
                "index": index,
                "exit_code": exit_code,
                "converged": converged,
                "duration_s": round(duration, 4),
            }
        },
    )
    return RunResult(
        index=index,
        mode=config.mode,
        exit_code=exit_code,
        converged=converged,
        error=error,
        artifacts=[str(p) for p in artifacts],
        duration_seconds=duration,
    )
