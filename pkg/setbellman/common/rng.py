"""Seeded random number generation.

All randomness flows through numpy's PCG64 bit generator so artifacts can name the
algorithm that produced them.
"""

from __future__ import annotations

import numpy as np

PRNG_NAME = "numpy.PCG64"


def make_rng(seed: int | np.random.SeedSequence | None) -> np.random.Generator:
    """Create a PCG64-backed Generator from an integer seed or SeedSequence."""
    return np.random.Generator(np.random.PCG64(seed))


def spawn_seeds(seed: int, n: int) -> list[np.random.SeedSequence]:
    """Split one 64-bit seed into `n` independent child seed sequences."""
    return np.random.SeedSequence(seed).spawn(n)


def prng_metadata(seed: int | None) -> dict:
    """Provenance block embedded in artifact headers."""
    return {"prng": PRNG_NAME, "numpy_version": np.__version__, "seed": seed}
