"""Plain and segmented Eratosthenes sieves returning numpy arrays."""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np


def primes_upto(limit: int) -> np.ndarray:
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def primes_in(lo: int, hi: int, base: np.ndarray | None = None) -> np.ndarray:
    """Primes in [lo, hi] (inclusive)."""
    lo = max(lo, 2)
    if hi < lo:
        return np.empty(0, dtype=np.int64)
    if base is None:
        base = primes_upto(math.isqrt(hi))
    flags = np.ones(hi - lo + 1, dtype=bool)
    for p in base:
        p = int(p)
        if p * p > hi:
            break
        start = max(p * p, -(-lo // p) * p)
        flags[start - lo :: p] = False
    return np.flatnonzero(flags).astype(np.int64) + lo


def prime_segments(limit: int, seg_len: int = 1 << 22) -> Iterator[np.ndarray]:
    """Yield the primes <= limit in increasing chunks."""
    base = primes_upto(math.isqrt(limit))
    lo = 2
    while lo <= limit:
        hi = min(lo + seg_len - 1, limit)
        yield primes_in(lo, hi, base)
        lo = hi + 1
