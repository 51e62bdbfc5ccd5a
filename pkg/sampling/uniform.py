"""
Uniform index selection, with and without replacement.

choose_without_replacement runs a sparse virtual Fisher-Yates shuffle over the
index range: only the touched positions are stored, so drawing k of n indices
costs O(k) time and memory regardless of n.
"""

from collections.abc import Iterator
from itertools import islice

import numpy as np


def choose_with_replacement(pool_size: int, z: int, rng: np.random.Generator) -> list[int]:
    """Draw z independent uniform indices in [0, pool_size)."""
    if pool_size < 1:
        raise ValueError("cannot draw from an empty pool")
    if z < 0:
        raise ValueError("z must be non-negative")
    if z == 0:
        return []
    return rng.integers(0, pool_size, size=z).tolist()


def virtual_shuffle(pool_size: int, rng: np.random.Generator) -> Iterator[int]:
    """
    Yield the indices 0..pool_size-1 in uniformly random order, lazily.

    Stopping after k values gives a uniform k-subset (in random order);
    every one of the C(pool_size, k) subsets is equally likely.
    """
    moved: dict[int, int] = {}
    for i in range(pool_size):
        j = int(rng.integers(i, pool_size))
        yield moved.get(j, j)
        # Position j now holds whatever sat at position i.
        moved[j] = moved.pop(i, i)


def choose_without_replacement(pool_size: int, k: int, rng: np.random.Generator) -> list[int]:
    """Draw k distinct uniform indices in [0, pool_size)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > pool_size:
        raise ValueError(f"cannot choose {k} distinct indices from a pool of {pool_size}")
    return list(islice(virtual_shuffle(pool_size, rng), k))
