"""
RNG Manager - Named, reproducible random streams for Monte Carlo work
"""
import numpy as np

from utils.errors import InvalidInputError

# Stable integer ids of stream purposes; never renumber an existing entry
STREAM_PURPOSES = {
    "drop": 0,
    "channel": 1,
    "noise": 2,
    "learn_channel": 3,
    "learn_noise": 4,
    "positions": 5,
}


class RngManager:
    """Hands out independent generators keyed by (purpose, indices) under one seed"""

    def __init__(self, seed):
        """
        Initialize the RNG manager

        Args:
            seed (int): Root seed of the run
        """
        if int(seed) != seed or seed < 0:
            raise InvalidInputError(f"seed must be a nonnegative integer, got {seed}")
        self.seed = int(seed)

    def stream(self, purpose, *keys):
        """
        Generator for one purpose and index tuple

        The same (seed, purpose, keys) always gives the same draws, whatever
        order streams are requested in and whichever worker requests them.

        Args:
            purpose (str): Name from STREAM_PURPOSES
            *keys (int): Indices such as drop, UE or block number

        Returns:
            numpy.random.Generator: Fresh PCG64 generator
        """
        if purpose not in STREAM_PURPOSES:
            raise InvalidInputError(f"unknown stream purpose {purpose!r}")
        spawn_key = (STREAM_PURPOSES[purpose], *(int(k) for k in keys))
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=spawn_key)))
