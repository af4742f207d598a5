"""Seeded, portable random streams.

Every random draw in the package goes through ``make_rng``: a numpy ``Generator`` over the
Philox-4x64-10 counter-based bit generator, keyed by ``SeedSequence([seed, *stream])``.
Independent ``stream`` tuples give independent sub-streams, so sweep points can be evaluated
in any order without changing their instances.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Return the generator for ``seed`` and an optional sub-stream path."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *stream])))


def gaussian(rng: np.random.Generator, *shape: int) -> np.ndarray:
    """Standard normal draws as float32."""
    return rng.standard_normal(shape).astype(np.float32)
