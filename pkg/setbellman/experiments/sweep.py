"""Parallel execution of config lists (sweeps).

Each config is an isolated run in its own worker process; results are merged back in
sweep-index order. Worker count is capped by `Settings.threads` (SETBELLMAN_THREADS).
Sweep entries that would write to the same artifact stem get per-index subdirectories.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor, as_completed

from setbellman.common.config import get_settings
from setbellman.common.logging import get_logger
from setbellman.experiments.engine import run
from setbellman.experiments.schemas import ExperimentConfig, RunResult

logger = get_logger("EXPERIMENT")


def _run_job(job: tuple[int, ExperimentConfig]) -> RunResult:
    index, config = job
    return run(config, index=index)


def isolate_outputs(configs: list[ExperimentConfig]) -> list[ExperimentConfig]:
    """Move colliding (out, stem) pairs into ``run_<index>`` subdirectories."""
    counts = Counter((c.out, c.stem) for c in configs)
    return [
        c.model_copy(update={"out": c.out / f"run_{i:03d}"}) if counts[(c.out, c.stem)] > 1 else c
        for i, c in enumerate(configs)
    ]


def combined_exit_code(results: list[RunResult]) -> int:
    """2 if any run was invalid, else 1 if any failed, else 0."""
    codes = {r.exit_code for r in results}
    if 2 in codes:
        return 2
    return 1 if 1 in codes else 0


def run_sweep(configs: list[ExperimentConfig], threads: int | None = None) -> list[RunResult]:
    """Run every config, in parallel when there is more than one and threads allow."""
    threads = get_settings().threads if threads is None else threads
    jobs = list(enumerate(isolate_outputs(configs)))
    workers = max(1, min(threads, len(jobs)))
    logger.info("Starting sweep", extra={"data": {"runs": len(jobs), "workers": workers}})

    if workers == 1:
        results = [_run_job(job) for job in jobs]
    else:
        results = []
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futures = {ex.submit(_run_job, job): job[0] for job in jobs}
            for future in as_completed(futures):
                results.append(future.result())
        results.sort(key=lambda r: r.index)

    failed = [r.index for r in results if r.exit_code != 0]
    logger.info(
        "Sweep finished",
        extra={"data": {"runs": len(results), "failed": failed}},
    )
    return results
