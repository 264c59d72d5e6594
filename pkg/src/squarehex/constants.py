"""Landau-Ramanujan constants, second order constants and the tau constants.

Everything runs through the inert-prime Euler factor

    A(s) = prod_{p inert} (1 - p^(-2s))^-1,

which satisfies the doubling relation

    A(s)^2 = zeta(2s) (1 - c^(-2s)) / L(2s, chi) * A(2s)

with c the ramified prime.  Unrolling it m times leaves A(2^m s), which is
taken as a short explicit prime product with a bounded remainder.  The
logarithmic derivative of the same relation gives the prime sum
Q(s) = sum_{p inert} log p / (p^(2s) - 1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from typing import Dict, Tuple

import mpmath
from mpmath import mpf

from .bigreal import BigReal
from .lfunctions import character, l_chi_with_derivative, zeta_with_derivative
from .primes import primes_upto
from .repr_core import B1, B3, FormClass

_TAIL_PRIMES = 2000


def _chi(fc: FormClass):
    return character(-4 if fc.j == 1 else -3)


def _inert_primes(fc: FormClass, bound: int = _TAIL_PRIMES):
    return [int(p) for p in primes_upto(bound) if fc.is_inert(int(p))]


def _ratio_terms(fc: FormClass, t, dps: int):
    """log[zeta(t)(1-c^-t)/L(t)] and its t-derivative."""
    z, dz = zeta_with_derivative(t, dps)
    lv, dl = l_chi_with_derivative(t, _chi(fc), dps)
    c = mpf(fc.special_prime)
    ct = c ** (-mpf(t))
    lc = mpmath.log(c)
    val = z.log() + mpmath.log(1 - ct) - lv.log()
    der = dz / z + lc * ct / (1 - ct) - dl / lv
    return val, der


def _direct_log_a(fc: FormClass, s) -> BigReal:
    """log A(s) from primes below the tail bound, plus a remainder bound."""
    e = 2 * mpf(s)
    acc = mpf(0)
    for p in _inert_primes(fc):
        acc -= mpmath.log1p(-mpf(p) ** (-e))
    P = mpf(_TAIL_PRIMES)
    rest = 2 * P ** (1 - e) / (e - 1)
    return BigReal(acc, rest)


def _direct_q(fc: FormClass, s) -> BigReal:
    """sum_{p inert} log p/(p^(2s)-1) over small primes, plus a remainder bound."""
    e = 2 * mpf(s)
    acc = mpf(0)
    for p in _inert_primes(fc):
        acc += mpmath.log(p) / (mpf(p) ** e - 1)
    P = mpf(_TAIL_PRIMES)
    rest = 2 * P ** (1 - e) * (mpmath.log(P) / (e - 1) + 1 / (e - 1) ** 2)
    return BigReal(acc, rest)


def log_inert_factor(fc: FormClass, s=1, levels: int = 6, dps: int = 50) -> BigReal:
    """log A(s) by ``levels`` doublings and an explicit remainder at 2^levels s."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    with mpmath.workdps(dps + 20):
        s = mpf(s)
        out = BigReal.exact(0)
        for n in range(1, levels + 1):
            v, _ = _ratio_terms(fc, 2 ** n * s, dps + 10)
            out = out + v * (mpf(2) ** -n)
        tail = _direct_log_a(fc, 2 ** levels * s)
        return out + tail * (mpf(2) ** -levels)


def inert_prime_sum(fc: FormClass, s=1, levels: int = 5, dps: int = 50) -> BigReal:
    """Q(s) = sum_{p inert} log p/(p^(2s)-1) by the differentiated doubling relation."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    with mpmath.workdps(dps + 20):
        s = mpf(s)
        out = BigReal.exact(0)
        for n in range(1, levels + 1):
            _, d = _ratio_terms(fc, 2 ** n * s, dps + 10)
            out = out - d / 2
        return out + _direct_q(fc, 2 ** levels * s)


def landau_ramanujan(fc: FormClass, terms: int = 6, dps: int = 50) -> BigReal:
    """C_f = A(1)^(1/2) / sqrt(2), with an extra 3^(-1/4) for the hexagonal form."""
    with mpmath.workdps(dps + 20):
        a = log_inert_factor(fc, 1, terms, dps)
        pref = mpmath.log(2) / 2
        if fc.j == 3:
            pref += mpmath.log(3) / 4
        return (a / 2 - pref).exp()


def _b_constant(fc: FormClass, levels: int, dps: int) -> BigReal:
    with mpmath.workdps(dps + 20):
        chi = _chi(fc)
        lv, dl = l_chi_with_derivative(1, chi, dps + 10)
        q = inert_prime_sum(fc, 1, levels, dps)
        c = mpf(fc.special_prime)
        # log 2 for the square form; log 3 / 2 for the hexagonal one
        ram = mpmath.log(c) * (mpf(1) / (c - 1))
        two_b = -mpmath.euler - dl / lv + ram + 2 * q
        return two_b / 2


def second_order(fc: FormClass, levels: int = 5, dps: int = 50) -> Tuple[BigReal, BigReal]:
    """(B_f, C_f(2)) with C_f(2) = (1 + B_f)/2."""
    b = _b_constant(fc, levels, dps)
    return b, (b + 1) / 2


def _log_split_factor(s, levels: int, dps: int) -> BigReal:
    """log G(s), G(s) = prod_{p = 1 mod 3} (1 - p^-s)^-1, for s >= 2."""
    with mpmath.workdps(dps + 20):
        z, _ = zeta_with_derivative(s, dps + 10)
        lv, _ = l_chi_with_derivative(s, character(-3), dps + 10)
        three = mpmath.log1p(-mpf(3) ** (-mpf(s)))
        a = log_inert_factor(B3, s, levels, dps)
        return (z.log() + lv.log() + three - a) / 2


def _split_prime_sum(s, levels: int, dps: int) -> BigReal:
    """R(s) = sum_{p = 1 mod 3} log p/(p^s - 1), for s >= 2."""
    with mpmath.workdps(dps + 20):
        s = mpf(s)
        z, dz = zeta_with_derivative(s, dps + 10)
        lv, dl = l_chi_with_derivative(s, character(-3), dps + 10)
        l3 = mpmath.log(3)
        q = inert_prime_sum(B3, s, levels, dps)
        return -(dz / z + dl / lv + l3 / (3 ** s - 1) + 2 * q) / 2


def tau_prime_sum_direct(cutoff: int = 10 ** 6) -> BigReal:
    """sum_{p = 1 mod 3} (2p+1) log p / ((p^2+p+1)(p+1)) to ``cutoff`` plus a tail bound."""
    acc = mpf(0)
    for p in primes_upto(cutoff):
        p = int(p)
        if p % 3 == 1:
            acc += (2 * p + 1) * mpmath.log(p) / ((p * p + p + 1) * (p + 1))
    # each term is below 2 log p / p^2; integrate 2 log t / t^2 past the cutoff
    P = mpf(cutoff)
    return BigReal(acc, 2 * (mpmath.log(P) + 1) / P)


def ramanujan_tau(dps: int = 50, levels: int = 5, direct_cutoff: int | None = None):
    """(C, B_T, (1 + B_T)/2) for the indicator of 3 not dividing tau(n).

    The prime sum over p = 1 mod 3 equals 2R(2) - 3R(3) with R as in
    ``_split_prime_sum``; passing ``direct_cutoff`` sums it term by term
    instead, which certifies only a few digits.
    """
    with mpmath.workdps(dps + 20):
        c3 = landau_ramanujan(B3, levels + 1, dps)
        g2 = _log_split_factor(2, levels, dps)
        g3 = _log_split_factor(3, levels, dps)
        big_c = c3 * 2 * (g3 - g2).exp()
        b3, _ = second_order(B3, levels, dps)
        if direct_cutoff is None:
            ps = _split_prime_sum(2, levels, dps) * 2 - _split_prime_sum(3, levels, dps) * 3
        else:
            ps = tau_prime_sum_direct(direct_cutoff)
        bt = b3 - ps - mpmath.log(3) / 2
        return big_c, bt, (bt + 1) / 2


@dataclass(frozen=True)
class ConstantSet:
    C_b1: BigReal
    C_b3: BigReal
    B_b1: BigReal
    B_b3: BigReal
    C2_b1: BigReal
    C2_b3: BigReal
    ratio: BigReal
    ramanujan_C: BigReal
    B_T: BigReal
    second_coeff_T: BigReal

    def to_dict(self, digits: int | None = None) -> Dict[str, dict]:
        out = {}
        for f in fields(self):
            v: BigReal = getattr(self, f.name)
            d = v.digits if digits is None else min(digits, v.digits)
            out[f.name] = {"value": v.to_str(d), "certified_digits": d}
        return out

    def to_json(self, digits: int | None = None) -> str:
        return json.dumps({"schema": 1, "constants": self.to_dict(digits)}, indent=2)


def compute_constants(dps: int = 50) -> ConstantSet:
    with mpmath.workdps(dps + 20):
        c1 = landau_ramanujan(B1, 6, dps)
        c3 = landau_ramanujan(B3, 6, dps)
        b1, c21 = second_order(B1, 5, dps)
        b3, c23 = second_order(B3, 5, dps)
        rc, bt, coeff = ramanujan_tau(dps)
        return ConstantSet(c1, c3, b1, b3, c21, c23, c1 / c3, rc, bt, coeff)


def landau_product_direct(cutoff: int = 10 ** 6) -> float:
    """(pi/4) prod_{p = 1 mod 4, p <= cutoff} (1 - p^-2)^(1/2), the split-prime form of C_b1."""
    acc = mpf(0)
    for p in primes_upto(cutoff):
        p = int(p)
        if p % 4 == 1:
            acc += mpmath.log1p(-mpf(p) ** -2)
    return float(mpmath.pi / 4 * mpmath.exp(acc / 2))


def doubling_identity_residual(fc: FormClass, s=1, dps: int = 40, cutoff: int = 5000) -> float:
    """Truncated-product check of A(s)^2 = zeta(2s)(1-c^-2s)/L(2s) * A(2s)."""
    with mpmath.workdps(dps + 10):
        s = mpf(s)
        ps = _inert_primes(fc, cutoff)
        lhs = sum(-2 * mpmath.log1p(-mpf(p) ** (-2 * s)) for p in ps)
        rhs_a = sum(-mpmath.log1p(-mpf(p) ** (-4 * s)) for p in ps)
        v, _ = _ratio_terms(fc, 2 * s, dps)
        return float(abs(lhs - (v.value + rhs_a)))
