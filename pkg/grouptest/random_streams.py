"""
Date: 2024-05-06 11:02:15
LastEditTime: 2024-06-11 09:44:27
Description: counter-based random streams; every random object in grouptest comes from here
FilePath: /grouptest/grouptest/random_streams.py
"""

import numpy as np

from grouptest import InvalidParameterError

SEED_MAX = 2**64 - 1


def check_seed(seed):
    if isinstance(seed, (bool, np.bool_)) or not isinstance(seed, (int, np.integer)):
        raise InvalidParameterError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if seed < 0 or seed > SEED_MAX:
        raise InvalidParameterError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def substream(seed, *path):
    """Generator for the substream ``path`` of ``seed``

    The bit generator is Philox (counter based), keyed through a SeedSequence
    whose spawn key is ``path``. Equal (seed, path) always give the same
    stream and distinct paths give independent streams, so substreams can be
    drawn in any order or in different processes.

    Parameters
    ----------
    seed
        64-bit master seed
    path
        non-negative integers naming the substream, e.g. (trial, 0)

    Returns
    -------
    np.random.Generator
    """
    seed = check_seed(seed)
    key = tuple(int(i) for i in path)
    if any(i < 0 for i in key):
        raise InvalidParameterError(f"substream path must be non-negative, got {key}")
    seq = np.random.SeedSequence(entropy=seed, spawn_key=key)
    return np.random.Generator(np.random.Philox(seq))


def derive_seed(seed, *path):
    """A 64-bit seed for the substream ``path``; used to hand seeds to generators"""
    seed = check_seed(seed)
    seq = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(i) for i in path))
    return int(seq.generate_state(1, dtype=np.uint64)[0])
