"""Seeded random streams.

Every stochastic draw in the project comes from a numpy ``Generator`` backed by the
PCG64 bit generator, created here from an integer seed. numpy ships no xoshiro-family
bit generator, so PCG64 stands in for one: a fixed stream per seed and a state that
round-trips through JSON.
"""
import copy

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    """
    Create a generator for the given seed.

    Args:
        seed: Non-negative integer seed.

    Returns:
        numpy Generator instance
    """
    return np.random.Generator(np.random.PCG64(seed))


def rng_state(rng: np.random.Generator) -> dict:
    """Snapshot of the bit generator state; plain ints and strings only."""
    return copy.deepcopy(rng.bit_generator.state)


def restore_rng(state: dict) -> np.random.Generator:
    bit_generator = np.random.PCG64()
    bit_generator.state = state
    return np.random.Generator(bit_generator)
