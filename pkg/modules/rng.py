"""
Random Stream Module for t-Improper Colouring

A splitmix64 generator. The i-th output of a stream seeded with s is a pure
function of (s, i), so blocks of draws can be produced with numpy in one shot
and reproduce the scalar generator bit for bit on every platform.
"""

import numpy as np

from modules.errors import ValidationError

MASK64 = 0xFFFF_FFFF_FFFF_FFFF
GOLDEN_GAMMA = 0x9E37_79B9_7F4A_7C15
_MIX1 = 0xBF58_476D_1CE4_E5B9
_MIX2 = 0x94D0_49BB_1331_11EB
_TO_UNIT = 2.0**-53


def check_seed(seed):
    """Validate a 64-bit unsigned seed and return it as int."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValidationError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise ValidationError(f"seed must fit in 64 unsigned bits, got {seed}")
    return seed


def mix64(z):
    """splitmix64 finaliser on a Python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def mix_seed(master_seed, index):
    """
    Derive an independent 64-bit seed from (master_seed, index)

    This is the index-th output of the splitmix64 stream started at
    master_seed, so derived seeds do not depend on evaluation order.

    Parameters:
    master_seed: 64-bit unsigned integer
    index: non-negative integer

    Returns:
    int: derived seed
    """
    master_seed = check_seed(master_seed)
    if index < 0:
        raise ValidationError("index must be non-negative")
    return mix64(master_seed + (index + 1) * GOLDEN_GAMMA)


class SplitMix64:
    """Sequential splitmix64 stream."""

    def __init__(self, seed):
        self.state = check_seed(seed)

    def next_u64(self):
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def next_float(self):
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _TO_UNIT


def u64_block(seed, start, count):
    """
    Outputs start .. start+count-1 of the stream seeded with seed

    Parameters:
    seed: 64-bit unsigned integer
    start: index of the first draw
    count: number of draws

    Returns:
    numpy.ndarray: uint64 array of length count
    """
    seed = check_seed(seed)
    counters = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    # uint64 array arithmetic wraps modulo 2**64
    z = counters * np.uint64(GOLDEN_GAMMA) + np.uint64(seed)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def uniform_block(seed, start, count):
    """Floats in [0, 1) matching SplitMix64.next_float draw for draw."""
    return (u64_block(seed, start, count) >> np.uint64(11)).astype(np.float64) * _TO_UNIT
