"""Command-line entry point: ``setbellman --config run.json [--out DIR] [--seed N] ...``.

Summaries go to stdout, logs to stderr. The process exits with 0 on success, 2 when any
input or config is invalid, 1 on runtime failure or non-convergence.
"""

from __future__ import annotations

import json
from pathlib import Path

import click
from pydantic import ValidationError

from setbellman.common.logging import get_logger, set_log_level
from setbellman.common.metrics import write_metrics
from setbellman.experiments.schemas import ExperimentConfig, load_configs
from setbellman.experiments.sweep import combined_exit_code, run_sweep

logger = get_logger("CLI")

U64 = click.IntRange(0, 2**64 - 1)


def apply_overrides(
    configs: list[ExperimentConfig],
    out: Path | None,
    seed: int | None,
    epsilon: float | None,
) -> list[ExperimentConfig]:
    """Flag values replace the matching fields of every config."""
    update: dict = {}
    if out is not None:
        update["out"] = out
    if seed is not None:
        update["seeds"] = [seed]
    if epsilon is not None:
        update["epsilon"] = epsilon
    return [c.model_copy(update=update) for c in configs] if update else configs


@click.command()
@click.option(
    "--config",
    "config_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Experiment config JSON (one object or a list for a sweep).",
)
@click.option(
    "--out",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Output directory (overrides config).",
)
@click.option("--seed", type=U64, default=None, help="Seed (overrides the config's seeds).")
@click.option(
    "--epsilon",
    type=click.FloatRange(min=0.0, min_open=True),
    default=None,
    help="Target accuracy (overrides config).",
)
@click.option("--quiet", is_flag=True, help="Only log warnings and errors.")
@click.pass_context
def main(
    ctx: click.Context,
    config_path: Path,
    out: Path | None,
    seed: int | None,
    epsilon: float | None,
    quiet: bool,
) -> None:
    """Solve interval-cost MDPs and simulate single-controller games."""
    if quiet:
        set_log_level("WARNING")

    try:
        configs = load_configs(config_path)
    except (ValidationError, json.JSONDecodeError) as exc:
        logger.error("Invalid config", extra={"data": {"path": str(config_path)}})
        click.echo(f"Invalid config {config_path}: {exc}", err=True)
        ctx.exit(2)
    if not configs:
        click.echo(f"Config {config_path} holds no runs", err=True)
        ctx.exit(2)

    configs = apply_overrides(configs, out, seed, epsilon)
    results = run_sweep(configs)

    metrics_dir = out or configs[0].out
    metrics_dir.mkdir(parents=True, exist_ok=True)
    write_metrics(metrics_dir / "metrics.prom")

    for r in results:
        status = "ok" if r.exit_code == 0 else f"exit {r.exit_code}"
        click.echo(
            f"[{r.index}] {r.mode}: {status}, converged={r.converged}, "
            f"artifacts={len(r.artifacts)}"
        )
        if r.error:
            click.echo(f"    {r.error}", err=True)
    ctx.exit(combined_exit_code(results))


if __name__ == "__main__":
    main()
