"""Effective sandwich bounds for mu_f(x) = sum_{n<=x} f(n)/n.

If the weighted Chebyshev error stays between D_- mu_f and D_+ mu_f, then

    (C_f/tau) L(x) <= mu_f(x) <= (C_f/tau) U(x),
    L = (log x - D_+)^(tau+1) / (log x - D_-),
    U = (log x - D_-)^(tau+1) / (log x - D_+).

This module evaluates those bounds, the two-point propagation criterion,
the monotonicity threshold for U(x/r) - L(x/s), the lower-bound bootstrap
for D_-, and the final chain showing lambda_b1 >= lambda_b3 past x0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .chebyshev import S_B3
from .repr_core import B1, B3, FormClass

LOG_SQRT2 = 0.5 * math.log(2.0)
LOG_SQRT3 = 0.5 * math.log(3.0)

# Upper bounds for sup H_f, and the bootstrap parameters per class
D_PLUS = {1: 0.2663, 3: 0.276}
D_MINUS_START = {1: -LOG_SQRT2, 3: -LOG_SQRT3}
ITER_FACTOR = {1: 97, 3: 25}
ITER_OFFSET = {1: 0.065, 3: 0.0}

PSI_B1_SLOPE = 0.4924
LAMBDA_B3_FACTOR = 1.08
LAMBDA_B1_FACTOR = 0.9848
ALPHA_BUDGET = 0.0224


class DomainError(ValueError):
    """log x does not exceed D_+ (or a similar precondition failed)."""


@dataclass(frozen=True)
class BoundParams:
    tau: float
    d_minus: float
    d_plus: float

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.d_minus > self.d_plus:
            raise ValueError("need d_minus <= d_plus")


def theorem_params(fc: FormClass) -> BoundParams:
    """Unconditional sandwich parameters valid for every x >= 1."""
    return BoundParams(0.5, D_MINUS_START[fc.j], D_PLUS[fc.j])


def _logs(x: float, p: BoundParams) -> Tuple[float, float]:
    lx = math.log(x)
    if lx <= p.d_plus:
        raise DomainError(f"log x = {lx} must exceed d_plus = {p.d_plus}")
    return lx - p.d_minus, lx - p.d_plus


def L_func(x: float, p: BoundParams) -> float:
    a, b = _logs(x, p)
    return b ** (p.tau + 1) / a


def U_func(x: float, p: BoundParams) -> float:
    a, b = _logs(x, p)
    return a ** (p.tau + 1) / b


@lru_cache(maxsize=None)
def _c_const(j: int) -> float:
    from .constants import landau_ramanujan

    return float(landau_ramanujan(B1 if j == 1 else B3, 6, 30).value)


def landau_constant(fc: FormClass) -> float:
    return _c_const(fc.j)


def mu_sandwich(x: float, fc: FormClass, p: Optional[BoundParams] = None) -> Tuple[float, float]:
    """((C_f/tau) L(x), (C_f/tau) U(x))."""
    p = p or theorem_params(fc)
    c = landau_constant(fc) / p.tau
    return c * L_func(x, p), c * U_func(x, p)


# --- propagation criterion --------------------------------------------------

class Lemma3Result(str, Enum):
    HOLDS = "holds_for_all_x_ge_x1"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Lemma3Report:
    result: Lemma3Result
    branch: int
    lhs: float        # L(x1/r)
    rhs: float        # c2 * U(x1/s)
    ratio_lhs: Optional[float] = None
    ratio_rhs: Optional[float] = None

    @property
    def holds(self) -> bool:
        return self.result is Lemma3Result.HOLDS


def lemma3_check(r: float, s: float, c2: float, p: BoundParams, pp: BoundParams,
                 x1: float) -> Lemma3Report:
    """Does L(x/r; p) >= c2 U(x/s; pp) at x1 propagate to every x >= x1?"""
    if min(r, s, c2) <= 0:
        raise ValueError("r, s, c2 must be positive")
    if p.tau != pp.tau:
        raise ValueError("both sides need the same tau")
    x0 = max(math.exp(pp.d_plus) * s, math.exp(p.d_plus) * r)
    if not x1 > x0:
        raise DomainError(f"x1 = {x1} must exceed {x0}")
    lhs = L_func(x1 / r, p)
    rhs = c2 * U_func(x1 / s, pp)
    ok = lhs >= rhs
    if math.log(s) + pp.d_minus <= p.d_plus + math.log(r):
        return Lemma3Report(Lemma3Result.HOLDS if ok else Lemma3Result.INCONCLUSIVE, 1, lhs, rhs)
    rl = c2 * (1 + (pp.d_plus - pp.d_minus) / (math.log(x1 / s) - pp.d_plus))
    rr = 1 + (p.d_minus - p.d_plus) / (math.log(x1 / r) - p.d_minus)
    res = Lemma3Result.HOLDS if ok and rl <= rr else Lemma3Result.INCONCLUSIVE
    return Lemma3Report(res, 2, lhs, rhs, rl, rr)


# --- monotonicity of U(x/r) - L(x/s) ------------------------------------------

def lemma4_threshold(d_minus: float, d_plus: float, r: float, s: float) -> float:
    if not d_plus > d_minus:
        raise ValueError("need d_plus > d_minus")
    if not s >= r >= 1:
        raise ValueError("need s >= r >= 1")
    return s * math.exp(1.01 * d_plus - 0.01 * d_minus)


def lemma4_grid_check(d_minus: float, d_plus: float, r: float, s: float,
                      points: int = 200, span: float = 1e3) -> Tuple[bool, float]:
    """Is U(x/r) - L(x/s) nonincreasing on a log grid past the threshold?

    Returns (ok, largest step increase).
    """
    t = lemma4_threshold(d_minus, d_plus, r, s)
    p = BoundParams(0.5, d_minus, d_plus)
    xs = np.geomspace(t, span * t, points)
    # the left end can sit on the domain edge of L(x/s)
    vals = []
    for x in xs:
        try:
            vals.append(U_func(x / r, p) - L_func(x / s, p))
        except DomainError:
            vals.append(math.inf)
    steps = np.diff(np.array(vals))
    worst = float(np.max(steps[np.isfinite(steps)])) if steps.size else 0.0
    return worst <= 1e-12 * max(1.0, abs(vals[-1])), worst


def lemma4_derivative_y_delta(x: float, d_minus: float, d_plus: float, r: float,
                              s: float) -> Tuple[float, float]:
    """The (y, delta) at which the monotonicity inequality must hold for x."""
    w = d_plus - d_minus
    return (math.log(x / s) - d_plus) / w, math.log(s / r) / w


# --- the auxiliary algebraic inequality ---------------------------------------

def lemma5_inequality(y: float, delta: float) -> bool:
    if y < 0 or delta < 0:
        raise ValueError("y and delta must be nonnegative")
    lhs = math.sqrt(y + 1 + delta) * (y + delta - 2) * (y + 1) ** 2
    rhs = math.sqrt(y) * (y + 3) * (y + delta) ** 2
    return lhs <= rhs


DELTA_POLY = (27, -198, 410, -936, 1299, -730)
Y_POLY = (27, -72, -2380, -12792, -33822, -48888, -32076, -2376, 27)


class RootIsolationError(RuntimeError):
    pass


def _peval(c: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for a in c:
        acc = acc * x + a
    return acc


def _prem(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a = list(a)
    while len(a) >= len(b) and any(a):
        q = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= q * b[i]
        a.pop(0)
    while a and a[0] == 0:
        a.pop(0)
    return a


def _sturm(c: Sequence[int]) -> List[List[Fraction]]:
    p0 = [Fraction(v) for v in c]
    n = len(p0) - 1
    p1 = [Fraction(v * (n - i)) for i, v in enumerate(c[:-1])]
    seq = [p0, p1]
    while True:
        r = _prem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-v for v in r])
    return seq


def _sign_changes(seq, x: Fraction) -> int:
    vals = [v for v in (_peval(p, x) for p in seq) if v != 0]
    return sum(1 for a, b in zip(vals, vals[1:]) if (a < 0) != (b < 0))


def real_roots(coeffs: Sequence[int], tol: float = 1e-14) -> List[float]:
    """All real roots of a squarefree integer polynomial, ascending.

    Sturm sequences isolate each root in a rational interval, which is then
    refined by bisection.
    """
    seq = _sturm(coeffs)
    bound = Fraction(1) + max(Fraction(abs(a), abs(coeffs[0])) for a in coeffs[1:])
    stack = [(-bound, bound)]
    isolated = []
    while stack:
        lo, hi = stack.pop()
        k = _sign_changes(seq, lo) - _sign_changes(seq, hi)
        if k == 0:
            continue
        if k == 1:
            isolated.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack += [(lo, mid), (mid, hi)]
    roots = []
    for lo, hi in sorted(isolated):
        flo, fhi = _peval(seq[0], lo), _peval(seq[0], hi)
        if fhi == 0:
            roots.append(float(hi))
            continue
        if flo == 0 or (flo < 0) == (fhi < 0):
            raise RootIsolationError("interval endpoints do not bracket a root")
        while float(hi - lo) > tol:
            mid = (lo + hi) / 2
            fm = _peval(seq[0], mid)
            if fm == 0:
                lo = hi = mid
                break
            if (fm < 0) == (flo < 0):
                lo, flo = mid, fm
            else:
                hi = mid
            # keep the rationals short
            lo = Fraction(lo).limit_denominator(1 << 80) if lo.denominator > 1 << 90 else lo
        roots.append(float((lo + hi) / 2))
    return roots


def lemma5_roots() -> Tuple[float, float]:
    """(y*, delta*): second-largest real root of the y-factor, largest of the delta-factor."""
    ys = real_roots(Y_POLY)
    ds = real_roots(DELTA_POLY)
    if len(ys) < 2 or not ds:
        raise RootIsolationError("unexpected root count")
    return ys[-2], ds[-1]


# --- bootstrap of D_- ---------------------------------------------------------

@dataclass
class IterationTrace:
    form: FormClass
    x0: float
    values: List[float]
    converged: bool
    frozen: bool = False

    @property
    def last(self) -> float:
        return self.values[-1]

    def to_dict(self) -> dict:
        return {"form": self.form.name, "x0": self.x0, "values": [repr(v) for v in self.values],
                "converged": self.converged, "frozen": self.frozen}


def _tilde_step(fc: FormClass, x: float, d: float) -> float:
    dp = D_PLUS[fc.j]
    p = BoundParams(0.5, d, dp)
    ratio = L_func(x / ITER_FACTOR[fc.j], p) / U_func(x, p)
    off = ITER_OFFSET[fc.j]
    return (ratio - 1) * (-D_MINUS_START[fc.j] + off) + off


def tilde_iteration(fc: FormClass, x0: float, iters: int = 8, tol: float = 1e-15) -> IterationTrace:
    """w~_i (hexagonal) or v~_i (square) at x0, i = 0..iters."""
    if x0 < 1e5:
        raise DomainError("x0 must be at least 1e5")
    w0 = D_MINUS_START[fc.j]
    vals = [w0]
    if iters == 0:
        return IterationTrace(fc, x0, vals, False)
    w1 = _tilde_step(fc, x0, w0)
    if not w1 > w0:
        return IterationTrace(fc, x0, [w0] * (iters + 1), True, frozen=True)
    vals.append(w1)
    for _ in range(iters - 1):
        vals.append(_tilde_step(fc, x0, vals[-1]))
    converged = abs(vals[-1] - vals[-2]) < tol * max(1.0, abs(vals[-1]))
    return IterationTrace(fc, x0, vals, converged)


# --- final chain --------------------------------------------------------------

@dataclass
class Link:
    name: str
    lhs: float
    rhs: float
    relation: str = "<"

    @property
    def holds(self) -> bool:
        if self.relation == "<":
            return self.lhs < self.rhs
        if self.relation == "<=":
            return self.lhs <= self.rhs
        if self.relation == ">":
            return self.lhs > self.rhs
        return self.lhs >= self.rhs

    @property
    def margin(self) -> float:
        return (self.rhs - self.lhs) if self.relation.startswith("<") else (self.lhs - self.rhs)


@dataclass
class ChainReport:
    x0: float
    iters: int
    w_tilde: Dict[str, float]
    v_tilde: Dict[str, float]
    links: List[Link] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(l.holds for l in self.links)

    def failing(self) -> List[Link]:
        return [l for l in self.links if not l.holds]

    def to_dict(self) -> dict:
        return {
            "schema": 1, "x0": repr(self.x0), "iters": self.iters, "ok": self.ok,
            "w_tilde": {k: repr(v) for k, v in self.w_tilde.items()},
            "v_tilde": {k: repr(v) for k, v in self.v_tilde.items()},
            "links": [{"name": l.name, "lhs": repr(l.lhs), "rhs": repr(l.rhs),
                       "relation": l.relation, "margin": repr(l.margin), "holds": l.holds}
                      for l in self.links],
        }


def _fmt_div(r: float) -> str:
    return f"{r:g}"


def theorem7_chain(x0: float = 1.5e11, iters: int = 8) -> ChainReport:
    """Check that 0.9848 C_b1 L_1(x/37) > 1.08 C_b3 U_3(x/3) >= lambda_b3 for x >= x0.

    U_3(x/r) and L_3(x/r) use D_- = w~_iters(x0/r), D_+ = 0.276; L_1(x/r)
    uses v~_iters(x0/r) and 0.2663.
    """
    if x0 < 1e9:
        raise DomainError("x0 must be at least 1e9")
    wcache: Dict[float, float] = {}
    vcache: Dict[float, float] = {}

    def w(r):
        if r not in wcache:
            wcache[r] = tilde_iteration(B3, x0 / r, iters).last
        return wcache[r]

    def v(r):
        if r not in vcache:
            vcache[r] = tilde_iteration(B1, x0 / r, iters).last
        return vcache[r]

    def p3(r):
        return BoundParams(0.5, w(r), D_PLUS[3])

    def p1(r):
        return BoundParams(0.5, v(r), D_PLUS[1])

    c1, c3 = landau_constant(B1), landau_constant(B3)
    rep = ChainReport(x0, iters, {}, {})
    u3 = U_func(x0 / 3, p3(3))

    corr = 0.0
    for lo, hi, slope in S_B3.intervals:
        alpha = slope - S_B3.default_slope
        diff = U_func(x0 / lo, p3(lo)) - L_func(x0 / hi, p3(hi))
        corr += alpha * diff
        # each difference must be nonincreasing from x0 on
        dm = min(w(lo), w(hi))
        rep.links.append(Link(f"monotone_threshold[{lo},{hi})",
                              lemma4_threshold(dm, D_PLUS[3], lo, hi), x0, "<="))
    rep.links.append(Link("envelope_correction", corr, ALPHA_BUDGET * u3, "<"))
    rep.links.append(Link("lambda_b3_factor", 2 * (S_B3.default_slope + ALPHA_BUDGET), LAMBDA_B3_FACTOR, "<="))
    rep.links.append(Link("lambda_b1_factor", LAMBDA_B1_FACTOR, 2 * PSI_B1_SLOPE, "<="))
    # U_3(x/3) grows with x once log(x/3) > 3 D_+ - 2 D_-
    rep.links.append(Link("u3_increasing", 3 * D_PLUS[3] - 2 * w(3), math.log(x0 / 3), "<"))
    lhs = LAMBDA_B1_FACTOR * c1 * L_func(x0 / 37, p1(37))
    rhs = LAMBDA_B3_FACTOR * c3 * u3
    rep.links.append(Link("main_inequality", lhs, rhs, ">"))
    # same comparison with the envelope correction actually incurred
    needed = 2 * (S_B3.default_slope + corr / u3)
    rep.links.append(Link("main_inequality_actual_envelope", lhs, needed * c3 * u3, ">"))
    l3 = lemma3_check(37, 3, LAMBDA_B3_FACTOR * c3 / (LAMBDA_B1_FACTOR * c1), p1(37), p3(3), x0)
    rep.links.append(Link(f"propagation_branch{l3.branch}_condition",
                          math.log(3) + w(3), D_PLUS[1] + math.log(37), "<="))
    rep.links.append(Link("propagation_holds", l3.lhs, l3.rhs, ">="))
    rep.w_tilde = {_fmt_div(k): val for k, val in sorted(wcache.items())}
    rep.v_tilde = {_fmt_div(k): val for k, val in sorted(vcache.items())}
    return rep


def conjecture3_threshold(limit: int = 10 ** 7) -> int:
    """Smallest integer x with C_b1 L_b1(x) >= C_b3 U_b3(x) under the unconditional parameters.

    With r = s = 1 the propagation criterion is in its first branch, so the
    inequality persists for every larger x and the crossing can be bisected.
    """
    c1, c3 = landau_constant(B1), landau_constant(B3)
    p1, p3 = theorem_params(B1), theorem_params(B3)
    c2 = c3 / c1

    def good(x):
        return lemma3_check(1, 1, c2, p1, p3, x).holds

    lo = int(math.ceil(max(math.exp(p1.d_plus), math.exp(p3.d_plus)))) + 1
    if good(lo):
        return lo
    hi = lo
    while not good(hi):
        hi *= 2
        if hi > limit:
            raise RuntimeError("no crossing below limit")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if good(mid):
            hi = mid
        else:
            lo = mid
    return hi
