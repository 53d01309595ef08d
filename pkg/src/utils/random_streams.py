"""
Counter-based random streams

Every trial, validation scene and sweep point owns an exclusive stream derived
from (seed, purpose, key...) so results never depend on execution order or on
how many workers share the batch.
"""
from enum import IntEnum
from typing import Sequence

import numpy as np


class StreamPurpose(IntEnum):
    """Namespaces that keep unrelated streams apart for the same seed"""
    NETWORK_TRIAL = 0
    BLOCKAGE_VALIDATION = 1


def trial_stream(seed: int, purpose: StreamPurpose, key: Sequence[int]) -> np.random.Generator:
    """
    Build the generator for one independent unit of work

    Args:
        seed: Experiment seed (non-negative, up to 64 bits)
        purpose: Stream namespace
        key: Integer coordinates of the unit, e.g. (grid indices..., trial_index)

    Returns:
        A Philox-backed generator; identical arguments give identical draws
    """
    if seed < 0:
        raise ValueError(f"Seed must be non-negative, got {seed}")
    if any(k < 0 for k in key):
        raise ValueError(f"Stream key entries must be non-negative, got {tuple(key)}")

    sequence = np.random.SeedSequence(
        entropy=int(seed),
        spawn_key=(int(purpose), *(int(k) for k in key))
    )
    return np.random.Generator(np.random.Philox(sequence))
