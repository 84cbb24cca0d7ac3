"""Experiment-harness exceptions."""

from __future__ import annotations

from setbellman.common.exceptions import SetBellmanError, SpecValidationError


class ExperimentError(SetBellmanError):
    """A run failed for a reason outside the solvers (unwritable output, I/O)."""


class ConfigError(SpecValidationError):
    """The config asks for something the input spec cannot provide."""
