"""
Deterministic random streams
============================
Every random draw in the toolkit comes from a generator derived from the
run seed plus a tuple of integer keys. Streams never share state, so the
result of any evaluation is independent of scheduling and of how many
worker processes run it.
"""

from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    """Stream tags (first key after the seed)."""
    INIT_POPULATION = 1
    EPISODE = 2
    SENSOR_NOISE = 3
    BREEDING = 4
    HOF_REEVALUATION = 5
    WAYPOINT_EVAL = 6
    FLIGHT_LOG = 7


def derive_seed_sequence(seed: int, *keys: int) -> np.random.SeedSequence:
    """SeedSequence keyed by (seed, *keys); keys must be non-negative."""
    return np.random.SeedSequence([int(seed), *(int(k) for k in keys)])


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """
    Build an independent generator for (seed, *keys).

    Args:
        seed: Run seed
        keys: Stream tag followed by stream-specific indices

    Returns:
        numpy Generator (PCG64)
    """
    return np.random.default_rng(derive_seed_sequence(seed, *keys))
