"""Root test configuration: shared fixtures for all test modules.

Environment variables are set BEFORE any setbellman imports so Settings never picks up
a developer's .env or shell overrides.
"""

from __future__ import annotations

import os

os.environ["SETBELLMAN_LOG_LEVEL"] = "WARNING"
os.environ["SETBELLMAN_THREADS"] = "2"

import numpy as np
import pytest

from setbellman.common.config import Settings, get_settings
from setbellman.common.rng import make_rng
from setbellman.grid.generator import GridSpec
from setbellman.setvi.operator import IntervalMdp
from tests.factories import make_toy_family

# ─── Clear cached settings so test env vars are used ───
get_settings.cache_clear()


@pytest.fixture
def test_settings() -> Settings:
    return get_settings()


@pytest.fixture
def rng() -> np.random.Generator:
    """Fresh, fixed-seed generator per test."""
    return make_rng(20240611)


@pytest.fixture
def toy_family() -> tuple[IntervalMdp, list[np.ndarray]]:
    return make_toy_family()


@pytest.fixture
def grid_3x3() -> GridSpec:
    return GridSpec(rows=3, cols=3, stick_prob=0.7, seed=7)
