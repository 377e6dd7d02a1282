"""Thread control and frontier utilities shared by the MIS and matching kernels."""

from __future__ import annotations

from contextlib import contextmanager

import numba
import numpy as np
from numba import njit

# The bundled TBB is often too old; go straight to OpenMP.
numba.config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]

DEFAULT_GRAIN = 256

UNDECIDED = np.int8(0)
IN_SET = np.int8(1)
REMOVED = np.int8(2)


def max_workers() -> int:
    return int(numba.config.NUMBA_NUM_THREADS)


@contextmanager
def worker_threads(workers: int, grain: int = DEFAULT_GRAIN):
    """Run the enclosed kernels on ``min(workers, max_workers())`` threads.

    Parallel loops are handed out in chunks of ``grain`` iterations, so a
    loop shorter than ``grain`` runs on one thread.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if grain < 1:
        raise ValueError(f"grain must be >= 1, got {grain}")
    previous = numba.get_num_threads()
    numba.set_num_threads(min(workers, max_workers()))
    previous_chunk = numba.set_parallel_chunksize(grain)
    try:
        yield
    finally:
        numba.set_parallel_chunksize(previous_chunk)
        numba.set_num_threads(previous)


@njit(cache=True)
def splitmix64(state):
    state = (state + np.uint64(0x9E3779B97F4A7C15)) & np.uint64(0xFFFFFFFFFFFFFFFF)
    z = state
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return state, z ^ (z >> np.uint64(31))


@njit(cache=True)
def perturb(items, state):
    """Shuffle ``items`` in place; emulates an adversarial processing order."""
    for i in range(items.size - 1, 0, -1):
        state, r = splitmix64(state)
        j = np.int64(r % np.uint64(i + 1))
        t = items[i]
        items[i] = items[j]
        items[j] = t
    return state


@njit(cache=True)
def compact(slots):
    """Pack the non-negative entries of a slot buffer, keeping their order."""
    return slots[slots >= 0]


@njit(cache=True)
def exclusive_scan(counts):
    out = np.empty(counts.size + 1, dtype=np.int64)
    out[0] = 0
    acc = 0
    for i in range(counts.size):
        acc += counts[i]
        out[i + 1] = acc
    return out


@njit(cache=True, inline="always")
def advance(pos, end, items, status):
    """Doubling probe past dead entries of ``items[pos:end]``.

    Looks at 1, 2, 4, ... entries per batch and stops at the first whose
    status is still undecided.  Returns ``(index of first live entry or end,
    entries examined)``; a batch counts in full, as it would on a PRAM.
    """
    examined = 0
    batch = 1
    while pos < end:
        stop = min(pos + batch, end)
        examined += stop - pos
        for j in range(pos, stop):
            if status[items[j]] == UNDECIDED:
                return j, examined
        pos = stop
        batch *= 2
    return end, examined
