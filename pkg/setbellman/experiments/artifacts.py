"""Artifact writers: result JSON and long-format CSV tables.

Every artifact carries a provenance header (resolved config, seed, PRNG name and numpy
version). Nothing time-dependent is written, so re-running a config reproduces each file
byte for byte.

CSV layout: one ``# {json header}`` comment line, then a pandas table with floats written
at `Settings.csv_significant_digits` significant digits.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pandas as pd

from setbellman.common.config import get_settings
from setbellman.common.logging import get_logger
from setbellman.common.rng import prng_metadata
from setbellman.experiments.exceptions import ExperimentError

logger = get_logger("EXPERIMENT")


def _jsonable(obj: object) -> object:
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    msg = f"Object of type {type(obj).__name__} is not JSON serializable"
    raise TypeError(msg)


def provenance(config: dict, seed: int | None) -> dict:
    """Header block shared by all artifacts of a run."""
    return {"config": config, **prng_metadata(seed)}


def dumps(payload: dict) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2, default=_jsonable) + "\n"


def _write_error(path: Path, exc: OSError) -> ExperimentError:
    return ExperimentError(
        "Cannot write artifact", context={"path": str(path), "error": exc.strerror or str(exc)}
    )


def _ensure_dir(path: Path) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ExperimentError(
            "Cannot create output directory", context={"path": str(path.parent)}
        ) from exc


def write_json(path: Path, payload: dict) -> Path:
    """Write `payload` as canonical JSON."""
    _ensure_dir(path)
    try:
        path.write_text(dumps(payload), encoding="utf-8")
    except OSError as exc:
        raise _write_error(path, exc) from exc
    logger.info("Artifact written", extra={"data": {"path": str(path)}})
    return path


def write_csv(path: Path, rows: list[dict], header: dict) -> Path:
    """Write long-format `rows` under a ``# {header}`` comment line."""
    _ensure_dir(path)
    digits = get_settings().csv_significant_digits
    frame = pd.DataFrame.from_records(rows)
    try:
        with path.open("w", encoding="utf-8", newline="") as handle:
            handle.write("# " + json.dumps(header, sort_keys=True, default=_jsonable) + "\n")
            frame.to_csv(handle, index=False, float_format=f"%.{digits}g", lineterminator="\n")
    except OSError as exc:
        raise _write_error(path, exc) from exc
    logger.info("Artifact written", extra={"data": {"path": str(path), "rows": len(rows)}})
    return path


def read_csv(path: Path) -> tuple[dict, pd.DataFrame]:
    """Read back a CSV artifact as (header, table)."""
    with Path(path).open(encoding="utf-8") as handle:
        first = handle.readline()
    commented = first.startswith("# ")
    header = json.loads(first[2:]) if commented else {}
    frame = pd.read_csv(path, skiprows=1 if commented else 0)
    return header, frame
