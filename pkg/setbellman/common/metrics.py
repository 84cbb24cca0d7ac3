"""Prometheus metrics definitions for setbellman.

All metric objects live in a dedicated registry so library use never touches the
process-global default registry. The CLI dumps it with `write_metrics()` into
`<out>/metrics.prom` (textfile-collector format).
"""

from __future__ import annotations

from pathlib import Path

from prometheus_client import CollectorRegistry, Counter, Histogram, write_to_textfile

REGISTRY = CollectorRegistry()

# ─── Solver Metrics ───

VALUE_ITERATIONS_TOTAL = Counter(
    "setbellman_value_iterations_total",
    "Bellman operator applications performed by iterative solvers",
    labelnames=["solver"],
    registry=REGISTRY,
)

SOLVES_TOTAL = Counter(
    "setbellman_solves_total",
    "Solver runs by outcome",
    labelnames=["solver", "outcome"],
    registry=REGISTRY,
)

# ─── Experiment Metrics ───

RUN_DURATION_SECONDS = Histogram(
    "setbellman_run_duration_seconds",
    "Experiment run duration in seconds",
    labelnames=["mode"],
    buckets=(0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 30.0, 120.0),
    registry=REGISTRY,
)

CONTAINMENT_VIOLATIONS_TOTAL = Counter(
    "setbellman_containment_violations_total",
    "Trajectory points found outside their interval iterate",
    registry=REGISTRY,
)


def write_metrics(path: Path) -> None:
    """Write the setbellman registry in Prometheus text format."""
    write_to_textfile(str(path), REGISTRY)
