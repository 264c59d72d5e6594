"""Segmented sieve for integers of the form x^2+y^2 and x^2+3y^2.

An interval [lo, hi] is marked by enumerating the lattice sums that land in
it, exactly as one would by hand: tabulate y^2 (or 3y^2) once for the
segment, then sweep x.  Segments are independent, so they are sieved and
summarised on a thread pool; the summaries are folded strictly in segment
order, which keeps every report identical regardless of the worker count.

Running totals track B_1, B_3 (exact integers), the log-weighted counts
lambda_j = sum b_j(n) log n and the harmonic counts mu_j = sum b_j(n)/n
(compensated), plus the smallest slack seen for each of

    B_1(x) >= B_3(x)                  (every x)
    lambda_1(x) >= lambda_3(x)        (x >= 8)
    mu_1(x) >= mu_3(x)                (every x)
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import struct
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numba import njit

from .summation import CompensatedSum, compensated_cumsum, neumaier_add

log = logging.getLogger(__name__)

DEFAULT_SEGMENT_LEN = 1 << 20
MAX_HI = 1 << 62
LAMBDA_FROM = 8
CONJECTURES = ("B", "lambda", "mu")
MAX_COUNTEREXAMPLES = 100


# --------------------------------------------------------------------------
# numba kernels


@njit(cache=True, inline="always")
def _isqrt(v):
    if v <= 0:
        return 0
    r = np.int64(math.sqrt(v))
    while r * r > v:
        r -= 1
    while (r + 1) * (r + 1) <= v:
        r += 1
    return r


@njit(cache=True, inline="always")
def _ceil_sqrt(v):
    if v <= 0:
        return 0
    r = _isqrt(v)
    if r * r < v:
        r += 1
    return r


@njit(cache=True, nogil=True)
def _mark_b1(lo, hi, bits):
    bits[:] = 0
    ymin = _ceil_sqrt((lo + 1) // 2)
    ymax = _isqrt(hi)
    if ymax < ymin:
        return
    sq = np.empty(ymax - ymin + 1, dtype=np.int64)
    for k in range(sq.shape[0]):
        y = ymin + k
        sq[k] = y * y
    xmax = _isqrt(hi // 2)
    for x in range(xmax + 1):
        x2 = x * x
        ys = _ceil_sqrt(lo - x2)
        if ys < x:
            ys = x
        if ys < ymin:
            ys = ymin
        ye = _isqrt(hi - x2)
        base = x2 - lo
        for y in range(ys, ye + 1):
            bits[sq[y - ymin] + base] = 1


@njit(cache=True, nogil=True)
def _mark_b3(lo, hi, bits):
    bits[:] = 0
    ymax = _isqrt(hi // 3)
    sq3 = np.empty(ymax + 1, dtype=np.int64)
    for y in range(ymax + 1):
        sq3[y] = 3 * y * y
    xmax = _isqrt(hi)
    for x in range(xmax + 1):
        x2 = x * x
        need = lo - x2
        ys = 0
        if need > 0:
            ys = _ceil_sqrt((need + 2) // 3)
        ye = _isqrt((hi - x2) // 3)
        base = x2 - lo
        for y in range(ys, ye + 1):
            bits[sq3[y] + base] = 1


# stats layout (float64): l1s l1c l3s l3c m1s m1c m3s m3c minL minM
# ints layout (int64):    c1 c3 minB minB_at minL_at minM_at
@njit(cache=True, nogil=True)
def _scan(lo, bits1, bits3, lam_from, samples, s0, s1, out_samples):
    n = bits1.shape[0]
    c1 = 0
    c3 = 0
    l1s = 0.0
    l1c = 0.0
    l3s = 0.0
    l3c = 0.0
    m1s = 0.0
    m1c = 0.0
    m3s = 0.0
    m3c = 0.0
    minB = np.int64(1) << 62
    minB_at = -1
    minL = np.inf
    minL_at = -1
    minM = np.inf
    minM_at = -1
    si = s0
    for k in range(n):
        x = lo + k
        if bits1[k]:
            c1 += 1
            l1s, l1c = neumaier_add(l1s, l1c, math.log(x))
            m1s, m1c = neumaier_add(m1s, m1c, 1.0 / x)
        if bits3[k]:
            c3 += 1
            l3s, l3c = neumaier_add(l3s, l3c, math.log(x))
            m3s, m3c = neumaier_add(m3s, m3c, 1.0 / x)
        d = c1 - c3
        if d < minB:
            minB = d
            minB_at = x
        if x >= lam_from:
            dl = (l1s - l3s) + (l1c - l3c)
            if dl < minL:
                minL = dl
                minL_at = x
        dm = (m1s - m3s) + (m1c - m3c)
        if dm < minM:
            minM = dm
            minM_at = x
        while si < s1 and samples[si] == x:
            row = out_samples[si]
            row[0] = c1
            row[1] = c3
            row[2] = l1s
            row[3] = l1c
            row[4] = l3s
            row[5] = l3c
            row[6] = m1s
            row[7] = m1c
            row[8] = m3s
            row[9] = m3c
            si += 1
    fstats = np.empty(10, dtype=np.float64)
    fstats[0] = l1s
    fstats[1] = l1c
    fstats[2] = l3s
    fstats[3] = l3c
    fstats[4] = m1s
    fstats[5] = m1c
    fstats[6] = m3s
    fstats[7] = m3c
    fstats[8] = minL
    fstats[9] = minM
    istats = np.empty(6, dtype=np.int64)
    istats[0] = c1
    istats[1] = c3
    istats[2] = minB
    istats[3] = minB_at
    istats[4] = minL_at
    istats[5] = minM_at
    return fstats, istats


@njit(cache=True, nogil=True)
def _segment_summary(lo, hi, lam_from, samples, s0, s1, out_samples):
    n = hi - lo + 1
    bits1 = np.empty(n, dtype=np.uint8)
    bits3 = np.empty(n, dtype=np.uint8)
    _mark_b1(lo, hi, bits1)
    _mark_b3(lo, hi, bits3)
    return _scan(lo, bits1, bits3, lam_from, samples, s0, s1, out_samples)


@njit(cache=True, nogil=True)
def _bits_upto(x_max, seg_len, which):
    """Full bitmap b_j[0..x_max] (index 0 unused)."""
    out = np.zeros(x_max + 1, dtype=np.uint8)
    lo = 1
    while lo <= x_max:
        hi = min(lo + seg_len - 1, x_max)
        buf = np.empty(hi - lo + 1, dtype=np.uint8)
        if which == 1:
            _mark_b1(lo, hi, buf)
        else:
            _mark_b3(lo, hi, buf)
        out[lo : hi + 1] = buf
        lo = hi + 1
    return out


# --------------------------------------------------------------------------
# public types


@dataclass
class Segment:
    lo: int
    hi: int
    bits1: np.ndarray
    bits3: np.ndarray

    def members(self, j: int) -> np.ndarray:
        bits = self.bits1 if j == 1 else self.bits3
        return np.flatnonzero(bits) + self.lo


@dataclass
class Margin:
    value: float
    location: int

    def to_json(self) -> dict:
        return {"value": repr(float(self.value)), "location": int(self.location)}


@dataclass
class RunningTotals:
    x: int = 0
    count1: int = 0
    count3: int = 0
    lam1: CompensatedSum = field(default_factory=CompensatedSum)
    lam3: CompensatedSum = field(default_factory=CompensatedSum)
    mu1: CompensatedSum = field(default_factory=CompensatedSum)
    mu3: CompensatedSum = field(default_factory=CompensatedSum)
    worst_margins: Dict[str, Margin] = field(default_factory=dict)
    counterexamples: List[Tuple[int, str]] = field(default_factory=list)
    violations: Dict[str, int] = field(default_factory=lambda: {c: 0 for c in CONJECTURES})
    lambda_exceptions_below_8: List[int] = field(default_factory=list)

    def copy(self) -> "RunningTotals":
        return RunningTotals(
            self.x, self.count1, self.count3,
            self.lam1.copy(), self.lam3.copy(), self.mu1.copy(), self.mu3.copy(),
            {k: Margin(m.value, m.location) for k, m in self.worst_margins.items()},
            list(self.counterexamples), dict(self.violations),
            list(self.lambda_exceptions_below_8),
        )

    def row(self) -> "TableRow":
        return TableRow(self.x, self.count1, self.count3, self.lam1.value,
                        self.lam3.value, self.mu1.value, self.mu3.value)


@dataclass(frozen=True)
class TableRow:
    x: int
    B1: int
    B3: int
    lambda1: float
    lambda3: float
    mu1: float
    mu3: float


@dataclass
class VerificationReport:
    x_max: int
    conjecture1_ok: bool
    conjecture2_ok: bool
    conjecture3_ok: bool
    counterexamples: List[Tuple[int, str]]
    table_rows: List[TableRow]
    totals: RunningTotals
    lambda_exceptions_below_8: List[int]
    segment_len: int
    timing: float = 0.0

    @property
    def ok(self) -> bool:
        return self.conjecture1_ok and self.conjecture2_ok and self.conjecture3_ok

    def to_json(self) -> dict:
        t = self.totals
        return {
            "schema": 1,
            "kind": "verify",
            "x_max": self.x_max,
            "segment_len": self.segment_len,
            "B1": t.count1,
            "B3": t.count3,
            "lambda1": repr(t.lam1.value),
            "lambda3": repr(t.lam3.value),
            "mu1": repr(t.mu1.value),
            "mu3": repr(t.mu3.value),
            "conjecture1_ok": self.conjecture1_ok,
            "conjecture2_ok": self.conjecture2_ok,
            "conjecture3_ok": self.conjecture3_ok,
            "worst_margins": {k: m.to_json() for k, m in t.worst_margins.items()},
            "counterexamples": [[x, w] for x, w in self.counterexamples],
            "lambda_exceptions_below_8": self.lambda_exceptions_below_8,
            "ok": self.ok,
        }


# --------------------------------------------------------------------------
# operations


def _check_range(lo: int, hi: int) -> None:
    if not 1 <= lo <= hi:
        raise ValueError(f"need 1 <= lo <= hi, got [{lo}, {hi}]")
    if hi > MAX_HI:
        raise OverflowError(f"hi={hi} exceeds 2^62")


def sieve_segment(lo: int, hi: int, segment_len: Optional[int] = None) -> Segment:
    """Mark the representable integers of [lo, hi] for both forms."""
    _check_range(lo, hi)
    if segment_len is not None and hi - lo + 1 > segment_len:
        raise ValueError("segment longer than the configured segment length")
    n = hi - lo + 1
    bits1 = np.empty(n, dtype=np.uint8)
    bits3 = np.empty(n, dtype=np.uint8)
    _mark_b1(lo, hi, bits1)
    _mark_b3(lo, hi, bits3)
    return Segment(lo, hi, bits1.view(bool), bits3.view(bool))


def representable_upto(x_max: int, j: int, segment_len: int = DEFAULT_SEGMENT_LEN) -> np.ndarray:
    """Boolean array b of length x_max+1 with b[n] = b_j(n); b[0] is False."""
    if j not in (1, 3):
        raise ValueError("j must be 1 or 3")
    _check_range(1, max(1, x_max))
    return _bits_upto(x_max, segment_len, j).view(bool)


def counts_upto(x_max: int, j: int) -> np.ndarray:
    """B_j(n) for n = 0..x_max as an int64 array."""
    return np.cumsum(representable_upto(x_max, j), dtype=np.int64)


_EMPTY_SAMPLES = np.empty(0, dtype=np.int64)


def _fold(t: RunningTotals, lo: int, hi: int, fstats, istats, seg_bits=None) -> RunningTotals:
    """Fold one segment summary into the prefix state ``t`` (in place)."""
    if lo != t.x + 1:
        raise ValueError(f"out-of-order segment: starts at {lo}, totals at {t.x}")
    c1_prev, c3_prev = t.count1, t.count3
    dB_prev = c1_prev - c3_prev
    dL_prev = (t.lam1.hi - t.lam3.hi) + (t.lam1.lo - t.lam3.lo)
    dM_prev = (t.mu1.hi - t.mu3.hi) + (t.mu1.lo - t.mu3.lo)

    candidates = {
        "B": (dB_prev + int(istats[2]), int(istats[3])),
        "lambda": (dL_prev + float(fstats[8]), int(istats[4])),
        "mu": (dM_prev + float(fstats[9]), int(istats[5])),
    }
    violated = []
    for name, (value, where) in candidates.items():
        if where < 0:
            continue
        cur = t.worst_margins.get(name)
        if cur is None or value < cur.value:
            t.worst_margins[name] = Margin(value, where)
        if value < 0:
            violated.append(name)

    prev = t.copy() if violated else None
    t.count1 += int(istats[0])
    t.count3 += int(istats[1])
    t.lam1.merge(fstats[0], fstats[1])
    t.lam3.merge(fstats[2], fstats[3])
    t.mu1.merge(fstats[4], fstats[5])
    t.mu3.merge(fstats[6], fstats[7])
    t.x = hi
    if violated:
        _record_violations(prev, t, lo, hi, violated, seg_bits)
    return t


def _record_violations(prev, t, lo, hi, names, seg_bits) -> None:
    """Rescan a segment that contains violations and list them."""
    if seg_bits is None:
        seg = sieve_segment(lo, hi)
        bits1, bits3 = seg.bits1, seg.bits3
    else:
        bits1, bits3 = seg_bits
    c1, c3 = prev.count1, prev.count3
    l1, l3, m1, m3 = prev.lam1.copy(), prev.lam3.copy(), prev.mu1.copy(), prev.mu3.copy()
    for k in range(hi - lo + 1):
        x = lo + k
        if bits1[k]:
            c1 += 1
            l1.add(math.log(x))
            m1.add(1.0 / x)
        if bits3[k]:
            c3 += 1
            l3.add(math.log(x))
            m3.add(1.0 / x)
        checks = {"B": c1 < c3, "lambda": x >= LAMBDA_FROM and l1.value < l3.value,
                  "mu": m1.value < m3.value}
        for name in names:
            if checks[name]:
                t.violations[name] += 1
                if len(t.counterexamples) < MAX_COUNTEREXAMPLES:
                    t.counterexamples.append((x, name))


def _small_lambda_exceptions(seg: Segment, t_before: RunningTotals) -> List[int]:
    out = []
    l1, l3 = t_before.lam1.value, t_before.lam3.value
    for k in range(min(seg.hi, LAMBDA_FROM - 1) - seg.lo + 1):
        x = seg.lo + k
        if seg.bits1[k]:
            l1 += math.log(x)
        if seg.bits3[k]:
            l3 += math.log(x)
        if l1 < l3:
            out.append(x)
    return out


def accumulate(seg: Segment, t: RunningTotals) -> RunningTotals:
    """Advance the totals across ``seg`` and apply the per-integer checks.

    Returns a new RunningTotals; ``t`` is left untouched.
    """
    if seg.lo != t.x + 1:
        raise ValueError(f"out-of-order segment: starts at {seg.lo}, totals at {t.x}")
    out = t.copy()
    if seg.lo < LAMBDA_FROM:
        out.lambda_exceptions_below_8.extend(_small_lambda_exceptions(seg, t))
    b1 = np.ascontiguousarray(seg.bits1, dtype=np.uint8)
    b3 = np.ascontiguousarray(seg.bits3, dtype=np.uint8)
    fstats, istats = _scan(seg.lo, b1, b3, LAMBDA_FROM, _EMPTY_SAMPLES, 0, 0,
                           np.empty((0, 10)))
    return _fold(out, seg.lo, seg.hi, fstats, istats, (b1, b3))


def sample_points_powers_of_two(x_max: int) -> List[int]:
    out, v = [], 2
    while v <= x_max:
        out.append(v)
        v *= 2
    return out


# --------------------------------------------------------------------------
# checkpoints

CHECKPOINT_VERSION = 1
_MAGIC = b"SQHX"
_HEADER = struct.Struct("<4sII Q")            # magic, version, reserved, segment_len
_SEG = struct.Struct("<c Q Q Q 12d 3d 3q 3Q 32s")
_ROW = struct.Struct("<c Q Q Q 12d")


def _record_fields(t: RunningTotals) -> list:
    margins = [t.worst_margins.get(c) for c in CONJECTURES]
    return [
        int(t.x), int(t.count1), int(t.count3),
        *[float(v) for v in (*t.lam1.pair(), *t.lam3.pair(), *t.mu1.pair(), *t.mu3.pair())],
        0.0, 0.0, 0.0, 0.0,
        *[float(m.value) if m else math.inf for m in margins],
        *[int(m.location) if m else -1 for m in margins],
        *[int(t.violations[c]) for c in CONJECTURES],
    ]


def _chain(prev: bytes, fields: list) -> bytes:
    h = hashlib.sha256(prev)
    h.update(json.dumps([repr(v) for v in fields]).encode())
    return h.digest()


class Checkpoint:
    """Append-only log: one record per segment boundary plus sample rows.

    Each segment record carries a SHA-256 chained over every earlier record,
    so a truncated or edited file is detected on resume.  ``fmt`` is
    ``"binary"`` (little-endian fixed width) or ``"json"`` (one object per
    line).
    """

    def __init__(self, path: Path, fmt: str = "binary"):
        if fmt not in ("binary", "json"):
            raise ValueError("checkpoint format must be 'binary' or 'json'")
        self.path = Path(path)
        self.fmt = fmt
        self.chain = b"\0" * 32

    def start(self, segment_len: int) -> None:
        self.chain = b"\0" * 32
        if self.fmt == "binary":
            self.path.write_bytes(_HEADER.pack(_MAGIC, CHECKPOINT_VERSION, 0, segment_len))
        else:
            head = {"type": "header", "version": CHECKPOINT_VERSION, "segment_len": segment_len}
            self.path.write_text(json.dumps(head) + "\n")

    def append(self, t: RunningTotals, rows: Sequence[TableRow] = ()) -> None:
        fields = _record_fields(t)
        self.chain = _chain(self.chain, fields)
        if self.fmt == "binary":
            buf = b"".join(
                _ROW.pack(b"R", r.x, r.B1, r.B3, r.lambda1, 0.0, r.lambda3, 0.0,
                          r.mu1, 0.0, r.mu3, 0.0, 0.0, 0.0, 0.0, 0.0)
                for r in rows
            )
            buf += _SEG.pack(b"S", *fields[:3], *fields[3:15], *fields[15:18],
                             *fields[18:21], *fields[21:24], self.chain)
            with open(self.path, "ab") as fh:
                fh.write(buf)
        else:
            lines = [json.dumps({"type": "row", "x": r.x, "B1": r.B1, "B3": r.B3,
                                 "lambda1": repr(r.lambda1), "lambda3": repr(r.lambda3),
                                 "mu1": repr(r.mu1), "mu3": repr(r.mu3)}) for r in rows]
            lines.append(json.dumps({"type": "segment",
                                     "fields": [repr(v) for v in fields],
                                     "checksum": self.chain.hex()}))
            with open(self.path, "a") as fh:
                fh.write("\n".join(lines) + "\n")

    def load(self, segment_len: int) -> Tuple[RunningTotals, List[TableRow]]:
        """Replay the log; returns the last totals and all rows recorded."""
        records, rows = self._read(segment_len)
        chain = b"\0" * 32
        last = None
        for fields, checksum in records:
            chain = _chain(chain, fields)
            if chain != checksum:
                raise CheckpointError("checksum mismatch: checkpoint is corrupt")
            last = fields
        self.chain = chain
        if last is None:
            return RunningTotals(), []
        t = _totals_from_fields(last)
        if t.x % segment_len != 0:
            raise CheckpointError("checkpoint does not end on a segment boundary")
        return t, [r for r in rows if r.x <= t.x]

    def _read(self, segment_len: int):
        if not self.path.exists():
            raise CheckpointError(f"no checkpoint at {self.path}")
        records, rows = [], []
        if self.fmt == "binary":
            data = self.path.read_bytes()
            if len(data) < _HEADER.size:
                raise CheckpointError("truncated checkpoint header")
            magic, version, _, seg = _HEADER.unpack_from(data, 0)
            if magic != _MAGIC or version != CHECKPOINT_VERSION:
                raise CheckpointError("not a checkpoint file of this version")
            if seg != segment_len:
                raise CheckpointError(f"segment length {seg} != requested {segment_len}")
            off = _HEADER.size
            while off < len(data):
                tag = data[off:off + 1]
                if tag == b"S" and off + _SEG.size <= len(data):
                    v = _SEG.unpack_from(data, off)
                    fields = [int(v[1]), int(v[2]), int(v[3]), *v[4:19], *[int(a) for a in v[19:25]]]
                    records.append((fields, v[25]))
                    off += _SEG.size
                elif tag == b"R" and off + _ROW.size <= len(data):
                    v = _ROW.unpack_from(data, off)
                    rows.append(TableRow(int(v[1]), int(v[2]), int(v[3]), v[4], v[6], v[8], v[10]))
                    off += _ROW.size
                else:
                    raise CheckpointError("truncated or corrupt checkpoint record")
        else:
            lines = self.path.read_text().splitlines()
            head = json.loads(lines[0])
            if head.get("version") != CHECKPOINT_VERSION:
                raise CheckpointError("not a checkpoint file of this version")
            if head.get("segment_len") != segment_len:
                raise CheckpointError(f"segment length {head.get('segment_len')} != requested {segment_len}")
            for line in lines[1:]:
                rec = json.loads(line)
                if rec["type"] == "row":
                    rows.append(TableRow(rec["x"], rec["B1"], rec["B3"], float(rec["lambda1"]),
                                         float(rec["lambda3"]), float(rec["mu1"]), float(rec["mu3"])))
                else:
                    raw = rec["fields"]
                    fields = [int(raw[0]), int(raw[1]), int(raw[2]),
                              *[float(v) for v in raw[3:18]], *[int(v) for v in raw[18:24]]]
                    records.append((fields, bytes.fromhex(rec["checksum"])))
        return records, rows


class CheckpointError(RuntimeError):
    pass


def _totals_from_fields(f: list) -> RunningTotals:
    t = RunningTotals(
        x=f[0], count1=f[1], count3=f[2],
        lam1=CompensatedSum(f[3], f[4]), lam3=CompensatedSum(f[5], f[6]),
        mu1=CompensatedSum(f[7], f[8]), mu3=CompensatedSum(f[9], f[10]),
    )
    for i, c in enumerate(CONJECTURES):
        if f[18 + i] >= 0:
            t.worst_margins[c] = Margin(f[15 + i], f[18 + i])
        t.violations[c] = f[21 + i]
    if t.x >= 1:
        # replayable exactly: only the integers 3, 4 and 7 ever qualify
        seg = sieve_segment(1, min(t.x, LAMBDA_FROM - 1))
        t.lambda_exceptions_below_8 = _small_lambda_exceptions(seg, RunningTotals())
    return t


# --------------------------------------------------------------------------
# driver


def default_workers() -> int:
    env = os.environ.get("SQUAREHEX_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def verify_conjectures(
    x_max: int,
    segment_len: int = DEFAULT_SEGMENT_LEN,
    workers: Optional[int] = None,
    samples: Optional[Sequence[int]] = None,
    checkpoint: Optional[Checkpoint] = None,
    resume: bool = False,
    progress: Optional[Callable[[int, float], None]] = None,
    checkpoint_every: int = 16,
) -> VerificationReport:
    """Scan [1, x_max] and check the three counting inequalities."""
    _check_range(1, max(1, x_max))
    if segment_len < 16:
        raise ValueError("segment_len too small")
    workers = workers or default_workers()
    sample_arr = np.array(sorted(set(samples if samples is not None
                                     else sample_points_powers_of_two(x_max))), dtype=np.int64)
    sample_arr = sample_arr[(sample_arr >= 1) & (sample_arr <= x_max)]

    t = RunningTotals()
    rows: List[TableRow] = []
    if checkpoint is not None:
        if resume:
            t, rows = checkpoint.load(segment_len)
            if t.x > x_max:
                raise CheckpointError(f"checkpoint at x={t.x} is beyond x_max={x_max}")
        else:
            checkpoint.start(segment_len)

    start = time.perf_counter()
    first_lo = t.x + 1
    bounds = [(lo, min(lo + segment_len - 1, x_max)) for lo in range(first_lo, x_max + 1, segment_len)]

    def job(b):
        lo, hi = b
        s0 = int(np.searchsorted(sample_arr, lo, "left"))
        s1 = int(np.searchsorted(sample_arr, hi, "right"))
        out = np.zeros((sample_arr.shape[0], 10))
        fs, is_ = _segment_summary(lo, hi, LAMBDA_FROM, sample_arr, s0, s1, out)
        return lo, hi, fs, is_, s0, s1, out

    pending_rows: List[TableRow] = []
    try:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for i, (lo, hi, fs, is_, s0, s1, out) in enumerate(pool.map(job, bounds)):
                if lo < LAMBDA_FROM:
                    t.lambda_exceptions_below_8 = _small_lambda_exceptions(
                        sieve_segment(lo, min(hi, LAMBDA_FROM - 1)), t)
                for si in range(s0, s1):
                    r = out[si]
                    l1 = t.lam1.copy().merge(r[2], r[3]).value
                    l3 = t.lam3.copy().merge(r[4], r[5]).value
                    m1 = t.mu1.copy().merge(r[6], r[7]).value
                    m3 = t.mu3.copy().merge(r[8], r[9]).value
                    row = TableRow(int(sample_arr[si]), t.count1 + int(r[0]),
                                   t.count3 + int(r[1]), l1, l3, m1, m3)
                    rows.append(row)
                    pending_rows.append(row)
                _fold(t, lo, hi, fs, is_)
                if checkpoint is not None and (hi == x_max or (i + 1) % checkpoint_every == 0):
                    if hi % segment_len == 0:
                        checkpoint.append(t, pending_rows)
                        pending_rows = []
                if progress is not None:
                    progress(hi, time.perf_counter() - start)
    except KeyboardInterrupt:
        if checkpoint is not None and t.x % segment_len == 0 and t.x > 0:
            checkpoint.append(t, pending_rows)
            log.warning("interrupted; checkpoint written at x=%d", t.x)
        raise

    elapsed = time.perf_counter() - start
    ok = {c: t.violations[c] == 0 for c in CONJECTURES}
    return VerificationReport(
        x_max=x_max,
        conjecture1_ok=ok["B"],
        conjecture2_ok=ok["lambda"],
        conjecture3_ok=ok["mu"],
        counterexamples=list(t.counterexamples),
        table_rows=rows,
        totals=t,
        lambda_exceptions_below_8=list(t.lambda_exceptions_below_8),
        segment_len=segment_len,
        timing=elapsed,
    )


def stderr_progress(total: int) -> Callable[[int, float], None]:
    last = [0.0]

    def report(x: int, elapsed: float) -> None:
        if elapsed - last[0] < 2.0 and x != total:
            return
        last[0] = elapsed
        rate = x / elapsed if elapsed > 0 else 0.0
        eta = (total - x) / rate if rate > 0 else float("inf")
        print(f"x={x} rate={rate:.3g}/s eta={eta:.1f}s", file=sys.stderr)

    return report


# --------------------------------------------------------------------------
# CSV

CSV_HEADER = "x,B1,B3,lambda1,lambda3,mu1,mu3"


def rows_to_csv(rows: Sequence[TableRow], decimals: int = 3) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.x},{r.B1},{r.B3},{r.lambda1:.{decimals}f},{r.lambda3:.{decimals}f},"
            f"{r.mu1:.{decimals}f},{r.mu3:.{decimals}f}"
        )
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# partial summation


def partial_summation_check(x: int) -> float:
    """Max over both forms of |M(x) - lambda(x)/log x - int_2^x lambda/(t log^2 t)|.

    M counts n in [2, x]; the integral is taken exactly over the step
    function lambda.
    """
    if x < 2:
        raise ValueError("x must be >= 2")
    n = np.arange(x + 1, dtype=np.float64)
    logs = np.zeros(x + 1)
    logs[1:] = np.log(n[1:])
    worst = 0.0
    for j in (1, 3):
        b = representable_upto(x, j)
        terms = np.where(b, logs, 0.0)
        lam = compensated_cumsum(terms)
        M = int(b[2:].sum())
        if x > 2:
            k = np.arange(2, x)
            pieces = lam[2:x] * (1.0 / logs[k] - 1.0 / logs[k + 1])
            integral = math.fsum(pieces)
        else:
            integral = 0.0
        worst = max(worst, abs(M - lam[x] / logs[x] - integral))
    return worst
