"""Seed-portable uniform variate generation.

Uses splitmix64 so identical seeds reproduce identical instances on any
platform or language. The generator is fully specified by its constants:
the state advances by 0x9E3779B97F4A7C15 per draw, and each draw is
finalized with two xorshift-multiply rounds (shift 30, multiply
0xBF58476D1CE4E5B9; shift 27, multiply 0x94D049BB133111EB) and a final
shift by 31. Doubles take the top 53 bits: (z >> 11) * 2**-53.
"""

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def splitmix64(seed: int, count: int) -> np.ndarray:
    """First ``count`` raw 64-bit outputs of the stream for ``seed``."""
    base = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    state = base + _GAMMA * np.arange(1, count + 1, dtype=np.uint64)
    z = (state ^ (state >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def uniform01(seed: int, count: int) -> np.ndarray:
    """``count`` doubles in [0, 1) with 53-bit resolution."""
    return (splitmix64(seed, count) >> np.uint64(11)).astype(np.float64) * 2.0**-53
