"""Seed derivation helpers.

All randomness in the package flows through numpy Generators built from a
SeedSequence, so that nested components (replicates, folds, classes) get
independent, reproducible streams from a single user-facing seed.
"""

from __future__ import annotations

import numpy as np


def derived_rng(seed: int, *stream: int) -> np.random.Generator:
    """Generator for the stream identified by ``(seed, *stream)``."""
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    entropy = [int(seed)] + [int(s) for s in stream]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def subseed(seed: int, *stream: int) -> int:
    """A derived nonnegative integer seed, stable across runs and platforms."""
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    entropy = [int(seed)] + [int(s) for s in stream]
    state = np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0]
    return int(state >> np.uint64(1))
