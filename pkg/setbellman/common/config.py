"""Library and CLI configuration via environment variables.

Uses pydantic-settings to load from a .env file and SETBELLMAN_* environment variables.
All config is centralized here; import `get_settings()`.
"""

from __future__ import annotations

import os
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings loaded from environment variables and .env file."""

    model_config = SettingsConfigDict(
        env_prefix="SETBELLMAN_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # ─── Runtime ───
    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    log_level: str = "INFO"

    # ─── Solver Defaults ───
    default_epsilon: float = Field(default=1e-6, gt=0.0)
    default_max_iters: int = Field(default=1_000_000, ge=1)

    # ─── Tolerances ───
    stochastic_tol: float = 1e-9  # kernel column sums
    certify_tol: float = 1e-8  # Bellman consistency of a certified policy
    containment_tol: float = 1e-9  # V^k in interval iterate
    tail_fraction: float = Field(default=0.1, gt=0.0, le=1.0)
    tail_distance_tol: float = 1e-3

    # ─── Artifacts ───
    csv_significant_digits: int = Field(default=17, ge=1, le=17)


@lru_cache
def get_settings() -> Settings:
    """Get cached settings singleton.

    In tests, call `get_settings.cache_clear()` to reset.
    """
    return Settings()
