"""Deterministic per-stream random generators.

Stream ``i`` of a run seeded with ``seed`` is a PCG64 generator seeded with
``seed XOR (i * GOLDEN_GAMMA mod 2**64)``. The same rule is used for
bootstrap iterations and synthetic games, so any stream can be regenerated
on its own, in any order, on any worker.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def check_seed(seed):
    if isinstance(seed, (bool, np.bool_)) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def stream_seed(seed, index):
    return (check_seed(seed) ^ ((int(index) * GOLDEN_GAMMA) & MASK64)) & MASK64


def stream_rng(seed, index):
    return np.random.Generator(np.random.PCG64(stream_seed(seed, index)))
