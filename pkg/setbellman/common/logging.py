"""Structured logging setup for setbellman.

Every log line includes: timestamp, level, module tag, message, and structured data.

Usage:
    from setbellman.common.logging import get_logger
    logger = get_logger("SETVI")
    logger.info("Set value iteration converged", extra={"data": {"iterations": 132}})
"""

from __future__ import annotations

import json
import logging
import sys
from datetime import datetime, timezone

UTC = timezone.utc

import numpy as np

# Module tags for structured logging
MODULE_TAGS = {
    "MDP",
    "INTERVAL",
    "SETVI",
    "GAME",
    "GRID",
    "EXPERIMENT",
    "CLI",
    "SYSTEM",
    "TEST",
}


def _json_default(obj: object) -> object:
    """Encode numpy values that json cannot handle natively."""
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return str(obj)


class StructuredFormatter(logging.Formatter):
    """Formats log records as structured, human-readable lines.

    Output format:
        2026-10-18T10:30:00Z | INFO | SETVI | Set value iteration converged | {"iterations": 132}
    """

    def format(self, record: logging.LogRecord) -> str:
        timestamp = datetime.now(UTC).strftime("%Y-%m-%dT%H:%M:%SZ")
        module_tag = getattr(record, "module_tag", "SYSTEM")

        data = getattr(record, "data", None)
        if data is not None:
            try:
                data_str = json.dumps(data, default=_json_default)
            except (TypeError, ValueError):
                data_str = str(data)
        else:
            data_str = ""

        parts = [timestamp, record.levelname, module_tag, record.getMessage()]
        if data_str:
            parts.append(data_str)
        return " | ".join(parts)


class ModuleTagLogger(logging.LoggerAdapter):
    """Logger adapter that injects module_tag and supports structured data."""

    def process(self, msg: str, kwargs: dict) -> tuple[str, dict]:
        extra = kwargs.get("extra", {})
        extra["module_tag"] = self.extra.get("module_tag", "SYSTEM")
        kwargs["extra"] = extra
        return msg, kwargs


# Cache loggers to avoid duplicate handlers
_loggers: dict[str, ModuleTagLogger] = {}

# Set by set_log_level(); wins over Settings.log_level
_level_override: int | None = None


def _default_level() -> int:
    if _level_override is not None:
        return _level_override
    try:
        from setbellman.common.config import get_settings

        return logging.getLevelName(get_settings().log_level.upper())
    except Exception:
        return logging.INFO


def get_logger(module_tag: str) -> ModuleTagLogger:
    """Get a structured logger with the given module tag.

    Args:
        module_tag: One of the MODULE_TAGS (MDP, SETVI, GAME, etc.)

    Returns:
        A logger adapter that injects the module tag into every log line.
    """
    if module_tag in _loggers:
        return _loggers[module_tag]

    logger = logging.getLogger(f"setbellman.{module_tag.lower()}")

    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(StructuredFormatter())
        logger.addHandler(handler)
        logger.setLevel(_default_level())
        logger.propagate = False

    adapter = ModuleTagLogger(logger, {"module_tag": module_tag})
    _loggers[module_tag] = adapter
    return adapter


def set_log_level(level: int | str) -> None:
    """Apply a level to every setbellman logger created so far and to the parent logger."""
    global _level_override
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    _level_override = level
    logging.getLogger("setbellman").setLevel(level)
    for adapter in _loggers.values():
        adapter.logger.setLevel(level)
