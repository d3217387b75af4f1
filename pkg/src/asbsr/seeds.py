"""Deterministic random-stream derivation.

All randomness in the package flows from a single 64-bit master seed.
Independent consumers (grid generators, mosaic patterns, Monte-Carlo
trials) derive their own substreams from the master seed plus a fixed
text label, so results do not depend on call order or parallelism.
"""

import zlib

import numpy as np

__all__ = ["substream"]


def substream(seed: int, label: str, *indices: int) -> np.random.Generator:
    """Return a generator for the (seed, label, indices...) substream.

    The label is hashed with CRC-32, which is stable across platforms and
    Python versions, and fed into numpy's SeedSequence spawn key together
    with any integer indices (e.g. a trial number).
    """
    key = (zlib.crc32(label.encode("ascii")),) + tuple(int(i) for i in indices)
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=key))
