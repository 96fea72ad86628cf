"""Deterministic 64-bit seed derivation.

Every simulation stream is seeded by a pure function of a master seed and
integer coordinates (groomer index, grid cell, replication), so runs are
reproducible regardless of execution order or process count.
"""

import struct

DEFAULT_SEED = 42

_MASK = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def mix_seed(master: int, *parts: int) -> int:
    """Fold integer coordinates into `master`, returning a 64-bit seed."""
    h = _splitmix64(master & _MASK)
    for p in parts:
        h = _splitmix64(h ^ (p & _MASK))
    return h


def float_key(x: float) -> int:
    """Bit pattern of a float, usable as a mix_seed coordinate."""
    return struct.unpack("<Q", struct.pack("<d", float(x)))[0]
