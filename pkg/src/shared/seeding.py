"""
Reproducible seed derivation for Monte-Carlo replications.

Replication k of a run seeded with s draws from
``numpy.random.default_rng(derive_seed(s, k))``. The derivation is a
splitmix64 finalizer applied to ``s + (k + 1) * golden_gamma``, so every
replication has its own independent stream no matter which worker runs it
or in what order.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MAX_SEED = MASK64


def derive_seed(seed: int, index: int) -> int:
    """
    Mix a base seed and a replication index into a 64-bit seed.

    Args:
        seed: Base seed (0 <= seed < 2**64)
        index: Replication index (>= 0)

    Returns:
        Derived 64-bit unsigned seed
    """
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    if index < 0:
        raise ValueError(f"replication index must be >= 0, got {index}")

    z = (seed + (index + 1) * GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def replication_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for replication ``index`` of a run seeded with ``seed``."""
    return np.random.default_rng(derive_seed(seed, index))
