"""Tests for the Prometheus metrics definitions.

Counters are process-global, so tests use a snapshot+delta pattern.
"""

from __future__ import annotations

import numpy as np

from setbellman.common.metrics import (
    REGISTRY,
    SOLVES_TOTAL,
    VALUE_ITERATIONS_TOTAL,
    write_metrics,
)
from setbellman.mdp.bellman import value_iteration
from setbellman.mdp.model import Mdp

# ─── Helpers ───


def _counter_value(counter, labels: dict) -> float:
    return counter.labels(**labels)._value.get()


class TestSolverCounters:
    def test_value_iteration_counts_iterations(self):
        before = _counter_value(VALUE_ITERATIONS_TOTAL, {"solver": "vi"})
        solves = _counter_value(SOLVES_TOTAL, {"solver": "vi", "outcome": "converged"})
        result = value_iteration(Mdp([[1.0, 1.0]], [[0.0, 1.0]], 0.5), np.zeros(1))
        after = _counter_value(VALUE_ITERATIONS_TOTAL, {"solver": "vi"})
        assert after == before + result.iterations
        assert (
            _counter_value(SOLVES_TOTAL, {"solver": "vi", "outcome": "converged"}) == solves + 1
        )


class TestRegistry:
    def test_dedicated_registry_lists_metrics(self):
        names = {m.name for m in REGISTRY.collect()}
        assert "setbellman_value_iterations" in names
        assert "setbellman_run_duration_seconds" in names

    def test_write_metrics_textfile(self, tmp_path):
        path = tmp_path / "metrics.prom"
        write_metrics(path)
        text = path.read_text()
        assert "setbellman_solves_total" in text
