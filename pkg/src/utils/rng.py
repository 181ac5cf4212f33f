"""
Seeded random streams.

All randomness derives from one 64-bit seed through numpy's SeedSequence and
the counter-based Philox bit generator, so child streams are independent and
reproducible regardless of the order in which they are consumed.
"""

import numpy as np


def make_rng(seed: int, *path: int) -> np.random.Generator:
    """
    Build the generator for a seed and an optional spawn path.

    Args:
        seed: Root 64-bit seed.
        path: Child indices; ``make_rng(s, 3)`` is the fourth child of ``s``.

    Returns:
        A Philox-backed numpy Generator.
    """
    sequence = np.random.SeedSequence(int(seed) & 0xFFFF_FFFF_FFFF_FFFF)
    for index in path:
        sequence = sequence.spawn(index + 1)[index]
    return np.random.Generator(np.random.Philox(sequence))


def child_seeds(seed: int, count: int) -> list[int]:
    """Derive ``count`` independent 64-bit integer seeds from ``seed``."""
    sequence = np.random.SeedSequence(int(seed) & 0xFFFF_FFFF_FFFF_FFFF)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in sequence.spawn(count)]
