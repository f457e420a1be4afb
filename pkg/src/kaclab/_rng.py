"""Counter-based random streams.

Every (seed, trial) pair owns its own Philox key, so a trial's draws never
depend on which worker ran it or in what order.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def stream_key(seed, trial):
    if trial < 0:
        raise ValueError("trial index must be non-negative")
    return (int(seed) & _MASK64) | ((int(trial) & _MASK64) << 64)


def bit_generator(seed, trial):
    return np.random.Philox(key=stream_key(seed, trial))


def generator(seed, trial):
    """A fresh ``numpy.random.Generator`` for the given (seed, trial)."""
    return np.random.Generator(bit_generator(seed, trial))


def random_signs(seed, trial, n):
    """n Rademacher signs (float64) from the raw Philox bits of one stream."""
    words = bit_generator(seed, trial).random_raw((n + 63) // 64)
    bits = np.unpackbits(words.view(np.uint8), bitorder="little")[:n]
    return 2.0 * bits - 1.0
