"""Deterministic seed derivation.

All ensemble/sweep randomness is derived from a base seed plus an integer
counter via a splitmix64 hop, so parallel execution cannot reorder or change
any stream.
"""

import numpy as np

_MASK = (1 << 64) - 1


def splitmix64(seed: int, counter: int) -> int:
    """Mix ``seed`` and ``counter`` into a 64-bit stream seed."""
    z = (seed + 0x9E3779B97F4A7C15 * (counter + 1)) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derived_rng(seed: int, counter: int) -> np.random.Generator:
    """PCG64 generator seeded with splitmix64(seed, counter)."""
    return np.random.default_rng(splitmix64(seed, counter))
