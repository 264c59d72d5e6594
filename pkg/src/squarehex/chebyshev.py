"""Prime-power sums for the representable semigroups.

For the form class of b_j the von Mangoldt analogue is supported on prime
powers: log p on p^k for split p and for the special prime, 2 log p on even
powers of inert p.  Everything here is built from the sorted event stream
(n, weight) of those jumps:

    psi(x) = sum_{n <= x} weight(n)
    H(x)   = sum_{n <= x} weight(n)/n - log(x)/2

H decreases strictly between events, so all its extrema and every
threshold question can be settled by looking at events and their left
limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .primes import prime_segments, primes_upto
from .repr_core import B1, B3, FormClass, mangoldt_f
from .summation import compensated_cumsum, csum

EVENT_SEGMENT = 1 << 22


@dataclass(frozen=True)
class PrimePowerEvent:
    n: int
    weight: float


def _higher_power_events(c: FormClass, bound: int) -> Tuple[np.ndarray, np.ndarray]:
    """Events p^k with k >= 2 (all of them have p <= sqrt(bound))."""
    ns: List[int] = []
    ws: List[float] = []
    for p in primes_upto(math.isqrt(bound)).tolist():
        lp = math.log(p)
        if c.is_inert(p):
            q = p * p
            while q <= bound:
                ns.append(q)
                ws.append(2.0 * lp)
                q *= p * p
        else:
            q = p * p
            while q <= bound:
                ns.append(q)
                ws.append(lp)
                q *= p
    order = np.argsort(np.array(ns, dtype=np.int64), kind="stable")
    return np.array(ns, dtype=np.int64)[order], np.array(ws, dtype=np.float64)[order]


def event_chunks(c: FormClass, bound: int, seg_len: int = EVENT_SEGMENT) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Sorted (n, weight) arrays covering [2, bound], one sieve segment at a time."""
    if bound < 2:
        raise ValueError("bound must be >= 2")
    hn, hw = _higher_power_events(c, bound)
    pos = 0
    for primes in prime_segments(bound, seg_len):
        if primes.size == 0:
            continue
        hi = int(primes[-1])
        keep = (primes % c.modulus == c.split_residue) | (primes == c.special_prime)
        pn = primes[keep]
        pw = np.log(pn.astype(np.float64))
        end = int(np.searchsorted(hn, hi, "right"))
        n = np.concatenate([pn, hn[pos:end]])
        w = np.concatenate([pw, hw[pos:end]])
        pos = end
        order = np.argsort(n, kind="stable")
        yield n[order], w[order]
    if pos < hn.size:
        yield hn[pos:], hw[pos:]


def prime_power_stream(c: FormClass, bound: int) -> Iterator[PrimePowerEvent]:
    for n, w in event_chunks(c, bound):
        for a, b in zip(n.tolist(), w.tolist()):
            yield PrimePowerEvent(a, b)


def prime_power_events(c: FormClass, bound: int) -> Tuple[np.ndarray, np.ndarray]:
    chunks = list(event_chunks(c, bound))
    if not chunks:
        return np.empty(0, dtype=np.int64), np.empty(0)
    return np.concatenate([a for a, _ in chunks]), np.concatenate([b for _, b in chunks])


@dataclass
class EventTable:
    """Events up to ``bound`` with psi and H evaluated at each of them."""

    form: FormClass
    bound: int
    n: np.ndarray
    weight: np.ndarray
    psi: np.ndarray
    h: np.ndarray

    @classmethod
    def build(cls, c: FormClass, bound: int) -> "EventTable":
        n, w = prime_power_events(c, bound)
        psi = compensated_cumsum(w)
        h = compensated_cumsum(w / n) - 0.5 * np.log(n.astype(np.float64))
        return cls(c, bound, n, w, psi, h)

    def psi_at(self, x: float) -> float:
        i = int(np.searchsorted(self.n, x, "right"))
        return float(self.psi[i - 1]) if i else 0.0

    def h_at(self, x: float) -> float:
        i = int(np.searchsorted(self.n, x, "right"))
        if i == 0:
            return -0.5 * math.log(x)
        return float(self.h[i - 1]) + 0.5 * math.log(float(self.n[i - 1])) - 0.5 * math.log(x)

    def h_left(self) -> np.ndarray:
        """H(n^-) at every event n."""
        return self.h - self.weight / self.n

    def to_csv(self) -> str:
        lines = ["n,Lambda,psi,H"]
        for a, b, c_, d in zip(self.n.tolist(), self.weight.tolist(), self.psi.tolist(), self.h.tolist()):
            lines.append(f"{a},{b!r},{c_!r},{d!r}")
        return "\n".join(lines) + "\n"


def psi_f(x: float, c: FormClass) -> float:
    if x < 2:
        return 0.0
    _, w = prime_power_events(c, int(x))
    return csum(w.tolist())


def h_direct(x: int, c: FormClass) -> float:
    """H(x) from the factorization-based Lambda; slow, used as a cross-check."""
    terms = []
    for n in range(2, int(x) + 1):
        lam = mangoldt_f(n, c)
        if lam:
            terms.append(lam / n)
    return math.fsum(terms) - 0.5 * math.log(x)


@dataclass
class HExtremum:
    location: int
    value: float
    form: FormClass
    search_bound: int
    min_left_value: float = 0.0
    min_left_location: int = 0

    def to_json(self) -> dict:
        return {
            "class": self.form.name,
            "search_bound": self.search_bound,
            "location": self.location,
            "value": repr(self.value),
            "min_left_location": self.min_left_location,
            "min_left_value": repr(self.min_left_value),
        }


def h_extrema(c: FormClass, bound: int, table: Optional[EventTable] = None) -> HExtremum:
    """Largest H over events <= bound, and the smallest left limit H(n^-)."""
    if bound < 2:
        raise ValueError("bound must be >= 2")
    t = table if table is not None else EventTable.build(c, bound)
    k = int(np.argmax(t.h))
    left = t.h_left()
    m = int(np.argmin(left))
    return HExtremum(int(t.n[k]), float(t.h[k]), c, bound, float(left[m]), int(t.n[m]))


class ThresholdNotReached(RuntimeError):
    pass


def h_threshold_scan(c: FormClass, level: float, x_max: int, table: Optional[EventTable] = None) -> int:
    """Smallest event v with H(x) >= level for every v <= x <= x_max."""
    t = table if table is not None else EventTable.build(c, x_max)
    n, h = t.n, t.h
    if n.size == 0:
        raise ThresholdNotReached("no events below x_max")
    left = t.h_left()
    ok_at = h >= level
    # the gap after event i ends at the next left limit (or at x_max)
    end_val = np.empty_like(h)
    end_val[:-1] = left[1:]
    end_val[-1] = h[-1] + 0.5 * math.log(float(n[-1])) - 0.5 * math.log(x_max)
    gap_ok = ok_at & (end_val >= level)
    bad = np.flatnonzero(~gap_ok)
    if bad.size == 0:
        return int(n[0])
    last_bad = int(bad[-1])
    if last_bad == n.size - 1:
        raise ThresholdNotReached(f"H drops below {level} before x_max={x_max}")
    return int(n[last_bad + 1])


# --------------------------------------------------------------------------
# linear envelopes for psi

DEFAULT_SLOPE = 0.5176
S_B3_INTERVALS: Tuple[Tuple[int, int, float], ...] = (
    (3, 49, 0.653954),
    (49, 181, 0.605778),
    (181, 487, 0.557372),
    (487, 1369, 0.534528),
    (1699, 1933, 0.526579),
    (2287, 2437, 0.521825),
    (3733, 3793, 0.51996),
)
PSI_B1_SLOPE = 0.4924
PSI_B1_FROM = 37
PSI_B3_FROM = 3793


@dataclass(frozen=True)
class EnvelopeSpec:
    intervals: Tuple[Tuple[int, int, float], ...] = S_B3_INTERVALS
    default_slope: float = DEFAULT_SLOPE

    def __post_init__(self):
        prev = -math.inf
        for lo, hi, _ in self.intervals:
            if not lo < hi or lo < prev:
                raise ValueError("intervals must be sorted, disjoint and nonempty")
            prev = hi

    def slope(self, y: float) -> float:
        for lo, hi, s in self.intervals:
            if lo <= y < hi:
                return s
        return self.default_slope

    def __call__(self, y: float) -> float:
        return self.slope(y) * y

    def breakpoints(self) -> List[int]:
        return sorted({v for lo, hi, _ in self.intervals for v in (lo, hi)})


S_B3 = EnvelopeSpec()


@dataclass
class EnvelopeCheck:
    name: str
    ok: bool
    min_slack: float
    location: float

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "min_slack": repr(self.min_slack),
                "location": self.location}


@dataclass
class EnvelopeReport:
    x_max: int
    checks: List[EnvelopeCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {"schema": 1, "kind": "envelopes", "x_max": self.x_max, "ok": self.ok,
                "checks": [c.to_json() for c in self.checks]}


def _worst(name: str, slack: np.ndarray, where: np.ndarray) -> EnvelopeCheck:
    k = int(np.argmin(slack))
    loc = where[k]
    return EnvelopeCheck(name, bool(slack[k] > 0), float(slack[k]),
                         int(loc) if float(loc).is_integer() else float(loc))


def check_envelopes(x_max: int, env: EnvelopeSpec = S_B3,
                    tables: Optional[Tuple[EventTable, EventTable]] = None) -> EnvelopeReport:
    """psi_b3 <= S_b3 on [2, x_max]; psi_b1 >= 0.4924x on [37, x_max];
    psi_b3 <= 0.5176x on [3793, x_max]."""
    if x_max < PSI_B3_FROM:
        raise ValueError(f"x_max must be >= {PSI_B3_FROM}")
    t1, t3 = tables if tables is not None else (EventTable.build(B1, x_max), EventTable.build(B3, x_max))
    report = EnvelopeReport(x_max)

    # psi_b3 is a step function, S piecewise linear increasing with downward
    # jumps at interval ends: test at every event and every breakpoint
    pts = np.unique(np.concatenate([
        t3.n.astype(np.float64),
        np.array([2.0] + [float(b) for b in env.breakpoints() if b <= x_max]),
    ]))
    idx = np.searchsorted(t3.n, pts, "right")
    psi = np.where(idx > 0, t3.psi[np.maximum(idx - 1, 0)], 0.0)
    s_vals = np.array([env(y) for y in pts.tolist()])
    report.checks.append(_worst("psi_b3<=S_b3", s_vals - psi, pts))

    # lower bound: worst just before each event, plus the ends
    n1 = t1.n
    inside = (n1 > PSI_B1_FROM) & (n1 <= x_max)
    left_pts = n1[inside].astype(np.float64)
    left_psi = t1.psi[np.flatnonzero(inside) - 1]
    ends = np.array([float(PSI_B1_FROM), float(x_max)])
    end_psi = np.array([t1.psi_at(v) for v in ends])
    pts1 = np.concatenate([left_pts, ends])
    slack1 = np.concatenate([left_psi, end_psi]) - PSI_B1_SLOPE * pts1
    report.checks.append(_worst(f"psi_b1>={PSI_B1_SLOPE}x", slack1, pts1))

    # upper bound: worst at each event
    sel = t3.n >= PSI_B3_FROM
    pts3 = np.concatenate([[float(PSI_B3_FROM)], t3.n[sel].astype(np.float64)])
    psi3 = np.concatenate([[t3.psi_at(PSI_B3_FROM)], t3.psi[sel]])
    report.checks.append(_worst(f"psi_b3<={DEFAULT_SLOPE}x", DEFAULT_SLOPE * pts3 - psi3, pts3))
    return report


# --------------------------------------------------------------------------
# tail estimates and the classical Mertens sum


def prime_square_tail(x: float, modulus: int, residue: int, cutoff: int = 10**7) -> Tuple[float, float]:
    """sum over p = residue mod modulus, p^r > sqrt(x) of log p / p^(2r).

    Summed exactly over p^r <= cutoff; the rest is bounded by
    sum_{n > cutoff} log n / n^2 <= (log cutoff + 1) / cutoff.
    Returns (partial sum, bound on the remainder).
    """
    y = math.sqrt(x)
    terms = []
    for p in primes_upto(cutoff).tolist():
        if p % modulus != residue:
            continue
        lp = math.log(p)
        q = p
        while q <= cutoff:
            if q > y:
                terms.append(lp / (q * q))
            q *= p
    rest = (math.log(cutoff) + 1.0) / cutoff
    return math.fsum(terms), rest


def mertens_sum(x: int) -> float:
    """sum_{n <= x} Lambda(n)/n for the classical von Mangoldt function."""
    from .summation import CompensatedSum

    acc = CompensatedSum()
    for primes in prime_segments(x):
        pf = primes.astype(np.float64)
        lp = np.log(pf)
        acc.add(math.fsum((lp / pf).tolist()))
        small = primes[primes <= math.isqrt(x)]
        for p in small.tolist():
            lpp = math.log(p)
            q = p * p
            while q <= x:
                acc.add(lpp / q)
                q *= p
    return acc.value
