"""Elementary route to explicit bounds for B_1 and B_3.

An approximate functional equation

    B(x) log(c x) - (x/2) int_1^x B(t)/t^2 dt = -I1 + I2 + I3 + I4 + B(x)/2

holds exactly for every x; the four terms are built from semigroup counts,
the Liouville-type weight mu(sigma0(d')) and the oscillating functions f, g.
Bounding each term linearly in x gives |B(x) - C x/sqrt(log x)| <= K x/log x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from numba import njit

from .repr_core import B1, B3, FormClass, factorize, mobius, sigma0
from .segment_sieve import counts_upto, representable_upto, sieve_segment
from .summation import compensated_cumsum

EULER_GAMMA = 0.57721566490153286061
C2 = 2.0 * math.exp(EULER_GAMMA)
C3 = math.sqrt(3.0) * math.exp(EULER_GAMMA)

EXACT_BUDGET = 10 ** 5


class BudgetExceeded(ValueError):
    pass


# --- multiplicative bookkeeping ---------------------------------------------

@dataclass(frozen=True)
class SemigroupSpec:
    """Integers all of whose prime factors satisfy p % modulus in residues, or p in extra."""

    name: str
    modulus: int
    residues: Tuple[int, ...]
    extra: Tuple[int, ...] = ()

    def allows(self, p: int) -> bool:
        return p in self.extra or p % self.modulus in self.residues

    def contains(self, n: int) -> bool:
        if n < 1:
            return False
        return all(self.allows(p) for p, _ in factorize(n))


P2 = SemigroupSpec("P2", 3, (2,))
P3 = SemigroupSpec("P3", 4, (3,))
P2_PRIME = SemigroupSpec("P2'", 3, (2,), (3,))
P3_PRIME = SemigroupSpec("P3'", 4, (3,), (2,))
# split-prime semigroups; these are what the reconstruction of B counts
ONE_MOD_4 = SemigroupSpec("1mod4", 4, (1,))
ONE_MOD_3 = SemigroupSpec("1mod3", 3, (1,))


@njit(cache=True)
def _spf(n):
    spf = np.zeros(n + 1, dtype=np.int64)
    for i in range(2, n + 1):
        if spf[i] == 0:
            for k in range(i, n + 1, i):
                if spf[k] == 0:
                    spf[k] = i
    return spf


@njit(cache=True)
def _membership(spf, modulus, residue_mask, extra_mask):
    n = spf.shape[0] - 1
    out = np.zeros(n + 1, dtype=np.bool_)
    if n >= 1:
        out[1] = True
    for k in range(2, n + 1):
        p = spf[k]
        ok = residue_mask[p % modulus] or (p < extra_mask.shape[0] and extra_mask[p])
        out[k] = ok and out[k // p]
    return out


@njit(cache=True)
def _liouville(spf):
    n = spf.shape[0] - 1
    out = np.zeros(n + 1, dtype=np.int64)
    if n >= 1:
        out[1] = 1
    for k in range(2, n + 1):
        out[k] = -out[k // spf[k]]
    return out


class Tables:
    """Sieved arrays on [0, n] shared by the exact term evaluations."""

    def __init__(self, n: int):
        if n > 4 * EXACT_BUDGET:
            raise BudgetExceeded(f"tables limited to {4 * EXACT_BUDGET}")
        self.n = n
        self.spf = _spf(max(n, 1))
        # mu(sigma0(k)) is (-1)^Omega(k)
        self.liouville = _liouville(self.spf)
        self._member: Dict[SemigroupSpec, np.ndarray] = {}
        self._count: Dict[SemigroupSpec, np.ndarray] = {}
        self._B: Dict[int, np.ndarray] = {}

    def member(self, s: SemigroupSpec) -> np.ndarray:
        if s not in self._member:
            rmask = np.zeros(s.modulus, dtype=np.bool_)
            for r in s.residues:
                rmask[r] = True
            emask = np.zeros(max(s.extra, default=0) + 1, dtype=np.bool_)
            for p in s.extra:
                emask[p] = True
            self._member[s] = _membership(self.spf, s.modulus, rmask, emask)
        return self._member[s]

    def count(self, s: SemigroupSpec) -> np.ndarray:
        if s not in self._count:
            self._count[s] = np.cumsum(self.member(s), dtype=np.int64)
        return self._count[s]

    def B(self, j: int) -> np.ndarray:
        if j not in self._B:
            self._B[j] = counts_upto(max(self.n, 1), j)
        return self._B[j]


def semigroup_count(x: int, s: SemigroupSpec, tables: Optional[Tables] = None) -> int:
    if x < 1:
        raise ValueError("x must be >= 1")
    t = tables or Tables(x)
    return int(t.count(s)[x])


def mobius_sigma0_identity(k_max: int) -> bool:
    """sum_{m^2 d = k} mu(d) == mu(sigma0(k)) for every k <= k_max."""
    for k in range(1, k_max + 1):
        acc = 0
        m = 1
        while m * m <= k:
            if k % (m * m) == 0:
                acc += mobius(k // (m * m))
            m += 1
        if acc != mobius(sigma0(k)):
            return False
    return True


# --- oscillating functions ----------------------------------------------------

class Osc(str, Enum):
    F = "f"
    G = "g"


@dataclass(frozen=True)
class OscFunction:
    which: Osc
    c: float
    modulus: int      # harmonic sum skips multiples of this
    weight: float     # coefficient of z log(c z)

    def __call__(self, z: float) -> float:
        return osc_eval(z, self)


F_OSC = OscFunction(Osc.F, C2, 2, 0.5)
G_OSC = OscFunction(Osc.G, C3, 3, 2.0 / 3.0)


def _partial_harmonic(n: int, modulus: int) -> float:
    return math.fsum(1.0 / k for k in range(1, n + 1) if k % modulus)


def osc_eval(z: float, w: OscFunction) -> float:
    if z < 1:
        raise ValueError("z must be >= 1")
    h = _partial_harmonic(int(math.floor(z)), w.modulus)
    return z * h - w.weight * z * math.log(w.c * z)


def osc_left(n: int, w: OscFunction) -> float:
    """Left limit at an integer n > 1."""
    v = osc_eval(n, w)
    return v - 1.0 if n % w.modulus else v


def osc_sup(w: OscFunction, cutoff: int = 50) -> Tuple[str, float]:
    """sup |w| over [1, cutoff]: integer values, left limits and interior critical points.

    Past small z the values at jumps and their left limits are bounded by
    decreasing envelopes, so the search window only needs to reach past
    the first few periods.
    """
    best = ("1", abs(osc_eval(1, w)))
    h = 0.0
    for n in range(1, cutoff + 1):
        if n % w.modulus:
            h += 1.0 / n
        cand = [(str(n), abs(osc_eval(n, w)))]
        if n > 1:
            cand.append((f"{n}-", abs(osc_left(n, w))))
        # on [n, n+1) the derivative is h - weight (log(c z) + 1)
        zc = math.exp(h / w.weight - 1.0) / w.c
        if n < zc < n + 1:
            cand.append((repr(zc), abs(zc * h - w.weight * zc * math.log(w.c * zc))))
        for c in cand:
            if c[1] > best[1]:
                best = c
    return best


def osc_sup_closed_form(w: OscFunction) -> float:
    g = EULER_GAMMA
    if w.which is Osc.F:
        return 1.5 * (math.log(6.0) + g) - 3.0
    return 8.0 / 3.0 * math.log(4.0 * math.sqrt(3.0) * math.exp(g)) - 6.0


def osc_limit(z: float, w: OscFunction) -> float:
    """Periodic function that w approaches as z grows."""
    def frac(t):
        return t - math.floor(t)
    if w.which is Osc.F:
        return 0.5 - frac((z - 1) / 2)
    return 1.0 - frac((z - 1) / 3) - frac((z + 1) / 3)


def osc_limit_gap(w: OscFunction, start: float, width: float = 6.0, points: int = 6001) -> float:
    """max |w(z) - limit(z)| over a grid on [start, start + width], avoiding jump points."""
    zs = np.linspace(start, start + width, points)
    n0 = int(math.floor(start))
    h0 = _partial_harmonic(n0, w.modulus)
    worst = 0.0
    for z in zs:
        if abs(z - round(z)) < 1e-9:
            continue
        n = int(math.floor(z))
        h = h0 + sum(1.0 / k for k in range(n0 + 1, n + 1) if k % w.modulus)
        val = z * h - w.weight * z * math.log(w.c * z)
        worst = max(worst, abs(val - osc_limit(z, w)))
    return worst


def em_harmonic_check(n: int) -> float:
    """theta with H_n = log n + gamma + 1/(2n) - 1/(12n^2) + theta/(60 n^4)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    # theta/(60n^4) sits about 4 log10(n) + 2 digits down
    dps = int(4 * math.log10(n)) + 30
    with mpmath.workdps(dps):
        if n <= 2000:
            q = sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))
            h = mpmath.mpf(q.numerator) / q.denominator
        else:
            h = mpmath.fsum(mpmath.mpf(1) / k for k in range(1, n + 1))
        nn = mpmath.mpf(n)
        r = h - mpmath.log(nn) - mpmath.euler - 1 / (2 * nn) + 1 / (12 * nn ** 2)
        return float(60 * nn ** 4 * r)


# --- the h = b identity -----------------------------------------------------

@dataclass(frozen=True)
class _Variant:
    form: FormClass
    ramified: int            # 2 or 3
    small: SemigroupSpec     # (P3) or (P2)
    small_prime: SemigroupSpec
    split: SemigroupSpec     # counted by psi
    osc: OscFunction
    modulus: int             # residue bookkeeping for the I3 count

    @property
    def c(self) -> float:
        return self.osc.c


VARIANTS = {
    1: _Variant(B1, 2, P3, P3_PRIME, ONE_MOD_4, F_OSC, 4),
    3: _Variant(B3, 3, P2, P2_PRIME, ONE_MOD_3, G_OSC, 3),
}


def _strip(d: int, p: int) -> int:
    while d % p == 0:
        d //= p
    return d


def h_values(k_max: int, j: int = 1, tables: Optional[Tables] = None) -> np.ndarray:
    """h(k) = sum_{dn=k, d in (P'), p ∤ n} mu(sigma0(d')) for k <= k_max."""
    v = VARIANTS[j]
    t = tables or Tables(k_max)
    mem = t.member(v.small_prime)
    lv = t.liouville
    out = np.zeros(k_max + 1, dtype=np.int64)
    _h_kernel(k_max, mem, lv, v.ramified, out)
    return out


@njit(cache=True)
def _h_kernel(k_max, mem, lv, p, out):
    for d in range(1, k_max + 1):
        if not mem[d]:
            continue
        dd = d
        while dd % p == 0:
            dd //= p
        w = lv[dd]
        for n in range(1, k_max // d + 1):
            if n % p:
                out[d * n] += w


def h_convolution_check(k_max: int, j: int = 1) -> bool:
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    h = h_values(k_max, j)
    b = representable_upto(k_max, j).astype(np.int64)
    return bool(np.array_equal(h[1:], b[1:]))


def reconstruct_B(x: int, j: int = 1, tables: Optional[Tables] = None) -> int:
    """B(x) as sum over powers of the ramified prime and squares from the small semigroup."""
    v = VARIANTS[j]
    t = tables or Tables(x)
    psi = t.count(v.split)
    mem = t.member(v.small)
    total = 0
    q = 1
    while q <= x:
        m = 1
        while q * m * m <= x:
            if mem[m]:
                total += int(psi[x // (q * m * m)])
            m += 1
        q *= v.ramified
    return total


# --- functional equation ----------------------------------------------------

@dataclass
class FunctionalTerms:
    x: int
    j: int
    B: int
    left: float
    I1: float
    I2: float
    I3: float
    I4: float

    @property
    def right(self) -> float:
        return -self.I1 + self.I2 + self.I3 + self.I4 + self.B / 2

    @property
    def residual(self) -> float:
        return abs(self.left - self.right)

    def to_dict(self) -> dict:
        return {"schema": 1, "x": self.x, "form": "b1" if self.j == 1 else "b3", "B": self.B,
                "left": repr(self.left), "right": repr(self.right),
                "I1": repr(self.I1), "I2": repr(self.I2), "I3": repr(self.I3), "I4": repr(self.I4),
                "residual": repr(self.residual)}


def _step_integral(Bc: np.ndarray, x: int) -> float:
    """int_1^x B(t)/t^2 dt for the right-continuous step function B."""
    if x <= 1:
        return 0.0
    n = np.arange(1, x, dtype=np.float64)
    return math.fsum(Bc[1:x] * (1.0 / n - 1.0 / (n + 1.0)))


@njit(cache=True)
def _i34(x, mem, lv, p, modulus, c, weight, hp):
    """I3, I4 by a pass over d in the extended small semigroup."""
    i3 = 0.0
    i3c = 0.0
    i4 = 0.0
    i4c = 0.0
    for d in range(1, x + 1):
        if not mem[d]:
            continue
        dd = d
        while dd % p == 0:
            dd //= p
        w = lv[dd]
        q = x // d
        r = dd % modulus
        cnt = (q - r) // modulus + 1 if q >= r else 0
        z = x / d
        lg = math.log(c * z)
        t = w * lg * (cnt - z / modulus)
        s = i3 + t
        if abs(i3) >= abs(t):
            i3c += (i3 - s) + t
        else:
            i3c += (t - s) + i3
        i3 = s
        fz = z * hp[q] - weight * z * lg
        t = -0.5 * w * fz
        s = i4 + t
        if abs(i4) >= abs(t):
            i4c += (i4 - s) + t
        else:
            i4c += (t - s) + i4
        i4 = s
    return i3 + i3c, i4 + i4c


def functional_terms(x: int, j: int = 1, tables: Optional[Tables] = None) -> FunctionalTerms:
    if not 2 <= x <= EXACT_BUDGET:
        raise BudgetExceeded(f"x must lie in [2, {EXACT_BUDGET}]")
    v = VARIANTS[j]
    t = tables if tables is not None and tables.n >= x else Tables(x)
    Bc = t.B(j)
    Bx = int(Bc[x])
    left = Bx * math.log(v.c * x) - 0.5 * x * _step_integral(Bc, x)

    i1 = []
    from .primes import primes_upto
    for p in primes_upto(int(math.isqrt(x))):
        p = int(p)
        if not v.small.allows(p):
            continue
        q = p * p
        while q <= x:
            i1.append(math.log(p) * Bc[x // q])
            q *= p * p

    psi = t.count(v.split)
    mem = t.member(v.small)
    i2 = []
    q = 1
    while q <= x:
        m = 1
        while q * m * m <= x:
            if mem[m]:
                k = q * m * m
                i2.append(math.log(k) * psi[x // k])
            m += 1
        q *= v.ramified

    n = np.arange(x + 1, dtype=np.float64)
    inv = np.zeros(x + 1)
    keep = (np.arange(x + 1) % v.osc.modulus) != 0
    keep[0] = False
    inv[keep] = 1.0 / n[keep]
    hp = compensated_cumsum(inv)
    i3, i4 = _i34(x, t.member(v.small_prime), t.liouville, v.ramified, v.modulus,
                  v.c, v.osc.weight, hp)
    return FunctionalTerms(x, j, Bx, left, math.fsum(i1), math.fsum(i2), i3, i4)


def functional_residual(x: int, form: FormClass = B1) -> float:
    return functional_terms(x, form.j).residual


# --- linear term bounds ------------------------------------------------------

TERM_BOUNDS = {
    1: {"I1": 0.23, "I2": 2.7, "I3": 2.68, "I4": 0.277},
    3: {"I1": 0.36, "I2": 2.7, "I3": 2.06, "I4": 0.36},
}


@dataclass
class TermBoundReport:
    checked: List[int]
    worst: Dict[str, float] = field(default_factory=dict)     # max |term|/x per term
    violations: List[Tuple[str, int, float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def psi_split_bound(x: int) -> int:
    return (x + 11) // 12 + (x + 7) // 12


def term_bound_check(x_max: int, points: int = 40) -> TermBoundReport:
    if x_max > EXACT_BUDGET:
        raise BudgetExceeded(f"x_max must be <= {EXACT_BUDGET}")
    xs = sorted({int(round(v)) for v in np.geomspace(2, x_max, points)})
    t = Tables(x_max)
    rep = TermBoundReport(xs)
    for j in (1, 3):
        tag = "I" if j == 1 else "J"
        for x in xs:
            ft = functional_terms(x, j, t)
            vals = {"I1": ft.I1, "I2": ft.I2, "I3": ft.I3, "I4": ft.I4}
            for k, bound in TERM_BOUNDS[j].items():
                name = tag + k[1]
                val = vals[k]
                rep.worst[name] = max(rep.worst.get(name, 0.0), abs(val) / x)
                if k in ("I1", "I2") and val < 0:
                    rep.violations.append((name, x, val))
                # the oscillation term bound is not strict
                over = abs(val) > bound * x if k == "I4" else abs(val) >= bound * x
                if over:
                    rep.violations.append((name, x, val))
    psi = t.count(ONE_MOD_4)
    for x in range(1, x_max + 1):
        if psi[x] > psi_split_bound(x):
            rep.violations.append(("psi4_sharp", x, float(psi[x])))
            break
    return rep


# --- explicit bounds against exact counts --------------------------------------

EXPLICIT_K = {1: 9.62, 3: 8.53}


@njit(cache=True)
def _explicit_scan(lo, bits, count, c, k):
    worst = 0.0
    worst_at = -1
    bad_at = -1
    for i in range(bits.shape[0]):
        x = lo + i
        count += bits[i]
        if x < 2:
            continue
        lx = math.log(x)
        dev = abs(count - c * x / math.sqrt(lx)) * lx / x
        if dev > worst:
            worst = dev
            worst_at = x
        if dev > k and bad_at < 0:
            bad_at = x
    return count, worst, worst_at, bad_at


@dataclass
class ExplicitBoundReport:
    x_max: int
    bound: Dict[str, float]
    worst: Dict[str, float]
    worst_at: Dict[str, int]
    first_violation: Dict[str, Optional[int]]

    @property
    def ok(self) -> bool:
        return all(v is None for v in self.first_violation.values())

    def to_dict(self) -> dict:
        return {"schema": 1, "x_max": self.x_max, "ok": self.ok,
                "bound": self.bound, "worst": {k: repr(v) for k, v in self.worst.items()},
                "worst_at": self.worst_at, "first_violation": self.first_violation}


def explicit_bound_check(x_max: int, segment_len: int = 1 << 22) -> ExplicitBoundReport:
    """max over 2 <= x <= x_max of |B(x) - C x/sqrt(log x)| log x / x, both forms."""
    from .bounds import landau_constant

    c = {1: landau_constant(B1), 3: landau_constant(B3)}
    count = {1: 0, 3: 0}
    worst = {1: 0.0, 3: 0.0}
    where = {1: -1, 3: -1}
    bad: Dict[int, Optional[int]] = {1: None, 3: None}
    lo = 1
    while lo <= x_max:
        hi = min(x_max, lo + segment_len - 1)
        seg = sieve_segment(lo, hi)
        for j, bits in ((1, seg.bits1), (3, seg.bits3)):
            cnt, w, at, b = _explicit_scan(lo, bits.astype(np.int64), count[j], c[j], EXPLICIT_K[j])
            count[j] = int(cnt)
            if w > worst[j]:
                worst[j], where[j] = float(w), int(at)
            if b >= 0 and bad[j] is None:
                bad[j] = int(b)
        lo = hi + 1
    names = {1: "b1", 3: "b3"}
    return ExplicitBoundReport(
        x_max,
        {names[j]: EXPLICIT_K[j] for j in (1, 3)},
        {names[j]: worst[j] for j in (1, 3)},
        {names[j]: where[j] for j in (1, 3)},
        {names[j]: bad[j] for j in (1, 3)},
    )


def crossover(k1: float = 9.62, k3: float = 8.53, c1: Optional[float] = None,
              c3: Optional[float] = None) -> float:
    """log10 of the point past which the two explicit bounds force B_1 >= B_3.

    Returns inf when the leading constants coincide (or are reversed).
    """
    if c1 is None or c3 is None:
        from .bounds import landau_constant
        c1 = landau_constant(B1) if c1 is None else c1
        c3 = landau_constant(B3) if c3 is None else c3
    gap = c1 - c3
    if gap <= 0:
        return math.inf
    return ((k1 + k3) / gap) ** 2 / math.log(10.0)
