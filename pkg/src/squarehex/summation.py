"""Error-free transformations for long floating point accumulations."""

from __future__ import annotations

from typing import Iterable, Tuple

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


@njit(cache=True, inline="always")
def neumaier_add(s, c, x):
    t = s + x
    if abs(s) >= abs(x):
        c += (s - t) + x
    else:
        c += (x - t) + s
    return t, c


class CompensatedSum:
    """Running Neumaier sum. ``value`` is ``hi + lo`` rounded once."""

    __slots__ = ("hi", "lo")

    def __init__(self, hi: float = 0.0, lo: float = 0.0):
        self.hi = float(hi)
        self.lo = float(lo)

    def add(self, x: float) -> "CompensatedSum":
        x = float(x)
        t = self.hi + x
        if abs(self.hi) >= abs(x):
            self.lo += (self.hi - t) + x
        else:
            self.lo += (x - t) + self.hi
        self.hi = t
        return self

    def merge(self, hi: float, lo: float) -> "CompensatedSum":
        """Add another compensated pair."""
        self.add(hi)
        self.lo += float(lo)
        return self

    @property
    def value(self) -> float:
        return self.hi + self.lo

    def pair(self) -> Tuple[float, float]:
        return self.hi, self.lo

    def copy(self) -> "CompensatedSum":
        return CompensatedSum(self.hi, self.lo)

    def __repr__(self) -> str:
        return f"CompensatedSum({self.value!r})"


def csum(values: Iterable[float]) -> float:
    acc = CompensatedSum()
    for v in values:
        acc.add(v)
    return acc.value


@njit(cache=True)
def compensated_cumsum(values):
    """Prefix sums of ``values`` with Neumaier compensation."""
    out = np.empty(values.shape[0], dtype=np.float64)
    s = 0.0
    c = 0.0
    for i in range(values.shape[0]):
        s, c = neumaier_add(s, c, values[i])
        out[i] = s + c
    return out
