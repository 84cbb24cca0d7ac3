"""Input spec files for the experiment harness tests."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from tests.factories import TOY_COSTS, TOY_DISCOUNT, TOY_KERNEL


def _write(path: Path, payload: dict) -> Path:
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


@pytest.fixture
def mdp_file(tmp_path) -> Path:
    """Single state, both actions cost 1; V* = 10."""
    return _write(
        tmp_path / "flat.json",
        {"kernel": TOY_KERNEL, "cost": [[1.0, 1.0]], "discount": TOY_DISCOUNT},
    )


@pytest.fixture
def toy_file(tmp_path) -> Path:
    return _write(
        tmp_path / "toy.json",
        {"kernel": TOY_KERNEL, "costs": TOY_COSTS, "discount": TOY_DISCOUNT},
    )


@pytest.fixture
def box_file(tmp_path) -> Path:
    return _write(
        tmp_path / "box.json",
        {
            "kernel": TOY_KERNEL,
            "cost_lo": [[0.0, 1.0]],
            "cost_hi": [[0.0, 2.0]],
            "discount": 0.9,
        },
    )


@pytest.fixture
def game_file(tmp_path) -> Path:
    """One-state matching game whose min-VI opponent produces a period-2 cycle."""
    return _write(
        tmp_path / "game.json",
        {
            "num_states": 1,
            "num_actions": 2,
            "kernel": [[1.0, 1.0]],
            "cost": [[0.0, 0.5]],
            "coupling": [[1.0, 1.0]],
            "coupling_form": "matching",
            "discount": 0.9,
            "discount_p2": 0.9,
            "opponent": {"kind": "min_vi"},
        },
    )


@pytest.fixture
def bad_mdp_file(tmp_path) -> Path:
    return _write(
        tmp_path / "bad.json",
        {"kernel": [[1.0, 0.9]], "cost": [[0.0, 1.0]], "discount": 0.9},
    )


@pytest.fixture
def out_dir(tmp_path) -> Path:
    return tmp_path / "out"
