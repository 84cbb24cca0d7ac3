"""Experiment harness: configs, mode dispatch, artifacts, sweeps and the CLI."""

from setbellman.experiments.engine import run
from setbellman.experiments.schemas import ExperimentConfig, RunResult, load_configs
from setbellman.experiments.sweep import run_sweep

__all__ = ["ExperimentConfig", "RunResult", "load_configs", "run", "run_sweep"]
