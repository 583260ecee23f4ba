"""
Seeded RNG helpers for deterministic simulations

Scheme ``pcg64-seedseq-v1``: every generator is ``Generator(PCG64(SeedSequence(root,
spawn_key=path)))``. A seed is either an int (empty path) or a tuple
``(root, i, j, ...)``. ``sub_seed(seed, r)`` appends ``r`` to the path, which is
exactly the ``r``-th child of ``SeedSequence(root).spawn``. Two different paths are
two different SeedSequence inputs, so sub-seeds never collide and replicate ``r``
gets the same stream whatever order replicates run in.
"""

from typing import Tuple, Union

import numpy as np

RNG_SCHEME = "pcg64-seedseq-v1"

SeedLike = Union[int, Tuple[int, ...]]


def seed_path(seed: SeedLike) -> Tuple[int, ...]:
    """Normalize a seed to its tuple path form"""
    if isinstance(seed, (int, np.integer)):
        path = (int(seed),)
    else:
        path = tuple(int(part) for part in seed)
    if not path or any(part < 0 for part in path):
        raise ValueError(f"seed path must be non-empty and non-negative, got {seed!r}")
    return path


def make_rng(seed: SeedLike) -> np.random.Generator:
    """Construct the PCG64 generator for a seed or seed path"""
    root, *key = seed_path(seed)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(root, spawn_key=tuple(key))))


def sub_seed(seed: SeedLike, index: int) -> Tuple[int, ...]:
    """Seed path of the ``index``-th independent child stream of ``seed``"""
    if index < 0:
        raise ValueError(f"sub-seed index must be >= 0, got {index}")
    return seed_path(seed) + (int(index),)


def format_seed(seed: SeedLike) -> str:
    """Stable text form used in reports, e.g. ``7`` or ``7/0/3``"""
    return "/".join(str(part) for part in seed_path(seed))
