"""Pydantic schemas for experiment configuration and run results.

A config file holds one `ExperimentConfig` object or a JSON list of them (a sweep).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator

from setbellman.common.schemas import GridSpecModel, OpponentSpec

Mode = Literal["solve", "set-solve", "certify", "trajectory", "game-sim", "grid-gen", "validate"]
SamplerName = Literal["uniform-box", "finite-list", "vertex"]

# ─── Configuration ───


class ExperimentConfig(BaseModel):
    """One run of the experiment harness."""

    model_config = ConfigDict(extra="forbid")

    mode: Mode
    input: Path | None = None  # spec file; every mode except grid-gen
    name: str | None = None  # artifact file stem, defaults to the mode
    out: Path = Path("out")
    epsilon: float = Field(default=1e-6, gt=0.0)
    max_iters: int = Field(default=1_000_000, ge=1)
    seeds: list[int] = Field(default_factory=lambda: [0])
    # set-solve / trajectory
    sampler: SamplerName = "uniform-box"
    num_samples: int = Field(default=50, ge=0)
    num_steps: int = Field(default=100, ge=1)  # trajectory steps / game iterations
    # game-sim
    opponent: OpponentSpec | None = None  # overrides the game file's opponent
    init: Literal["zeros", "uniform"] = "zeros"  # player one's V^0
    # grid-gen
    grid: GridSpecModel | None = None

    @model_validator(mode="after")
    def validate_mode_fields(self) -> ExperimentConfig:
        """Ensure the fields the mode needs are present."""
        if self.mode == "grid-gen":
            if self.grid is None:
                msg = "mode 'grid-gen' requires 'grid'"
                raise ValueError(msg)
        elif self.input is None:
            msg = f"mode '{self.mode}' requires 'input'"
            raise ValueError(msg)
        if not self.seeds:
            msg = "At least one seed is required"
            raise ValueError(msg)
        if any(s < 0 or s >= 2**64 for s in self.seeds):
            msg = "Seeds must be unsigned 64-bit integers"
            raise ValueError(msg)
        return self

    @property
    def stem(self) -> str:
        return self.name or self.mode

    def resolved(self) -> dict:
        """JSON-ready view of the full config, embedded in every artifact."""
        return self.model_dump(mode="json")


_CONFIG_LIST = TypeAdapter(list[ExperimentConfig])


def load_configs(path: Path) -> list[ExperimentConfig]:
    """Read a single config or a sweep list from a JSON file.

    Relative `input` paths resolve against the config file's directory.

    Raises:
        pydantic.ValidationError: Malformed config; the message names the field.
        json.JSONDecodeError: The file is not JSON.
    """
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    configs = _CONFIG_LIST.validate_python(raw if isinstance(raw, list) else [raw])
    base = Path(path).parent
    return [
        cfg.model_copy(update={"input": base / cfg.input})
        if cfg.input is not None and not cfg.input.is_absolute()
        else cfg
        for cfg in configs
    ]


# ─── Results ───


class RunResult(BaseModel):
    """Outcome of one run: exit code, artifact paths and the JSON-ready summary."""

    index: int = 0
    mode: Mode
    exit_code: int
    converged: bool | None = None
    error: str | None = None
    artifacts: list[str] = []
    duration_seconds: float = 0.0
