"""Compensated summation and deterministic chunked reduction.

Parallel reductions split work into chunks whose boundaries depend only on
the problem size, never on the worker count.  Each chunk returns a
compensated partial sum; partials are combined in chunk order.  The result is
therefore bit-identical for any number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def neumaier_sum(values):
    s = 0.0
    c = 0.0
    for v in values:
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c


@njit(cache=True, nogil=True)
def neumaier_add(s, c, v):
    """One Neumaier step; returns the updated ``(sum, compensation)``."""
    t = s + v
    if abs(s) >= abs(v):
        c += (s - t) + v
    else:
        c += (v - t) + s
    return t, c


def compensated_sum(values) -> float:
    """Ascending-order compensated sum of a 1-D float array."""
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.size == 0:
        return 0.0
    return float(neumaier_sum(arr))


def combine_partials(partials) -> np.ndarray:
    """Combine per-chunk partial sums (chunk axis first) in chunk order."""
    arr = np.asarray(partials, dtype=np.float64)
    if arr.ndim == 1:
        return np.float64(math.fsum(arr))
    flat = arr.reshape(arr.shape[0], -1)
    out = np.array([math.fsum(flat[:, j]) for j in range(flat.shape[1])])
    return out.reshape(arr.shape[1:])


def chunk_bounds(n: int, chunk: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]


def chunked_reduce(kernel, n: int, chunk: int, workers: int = 1):
    """Evaluate ``kernel(lo, hi)`` over fixed chunks of ``range(n)`` and sum.

    ``kernel`` must return an array of partial sums (it should release the
    GIL for ``workers > 1`` to help).  Chunk boundaries depend only on ``n``
    and ``chunk``, and partials are combined in chunk order.
    """
    bounds = chunk_bounds(n, chunk)
    if not bounds:
        return None
    if workers <= 1 or len(bounds) == 1:
        partials = [kernel(lo, hi) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(lambda b: kernel(*b), bounds))
    return combine_partials(partials)
