"""zeta(s) and L(s, chi) with s-derivatives via Euler-Maclaurin.

Both are written as character-weighted Hurwitz sums,

    L(s, chi) = k^-s * sum_a chi(a) zeta(s, a/k),

and each zeta(s, q) is expanded as

    sum_{n<M} (n+q)^-s + (M+q)^(1-s)/(s-1) + (M+q)^-s/2
        + sum_j B_2j/(2j)! * s(s+1)...(s+2j-2) * (M+q)^(-s-2j+1).

For a nonprincipal character the weights sum to zero, so the pole terms are
combined before taking s -> 1 and L(1, chi), L'(1, chi) come out of the same
expansion.  Derivatives are taken term by term.  The truncation error is
bounded by twice the first omitted correction term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import mpmath
from mpmath import mpf

from .bigreal import BigReal


class PrecisionError(RuntimeError):
    """Requested precision not reachable within the term budget."""


@dataclass(frozen=True)
class CharacterSpec:
    discriminant: int
    modulus: int
    values: Tuple[int, ...]   # chi(0), chi(1), ..., chi(k-1)

    def __post_init__(self):
        k = self.modulus
        if len(self.values) != k:
            raise ValueError("need one value per residue class")
        if sum(self.values) != 0:
            raise ValueError("character values must sum to zero")
        if self.values[k - 1] != -1:
            raise ValueError("character must be odd")
        for a in range(k):
            for b in range(k):
                if self(a * b) != self(a) * self(b):
                    raise ValueError("character is not completely multiplicative")

    def __call__(self, n: int) -> int:
        return self.values[n % self.modulus]


CHI_M4 = CharacterSpec(-4, 4, (0, 1, 0, -1))
CHI_M3 = CharacterSpec(-3, 3, (0, 1, -1))


def character(discriminant: int) -> CharacterSpec:
    if discriminant == -4:
        return CHI_M4
    if discriminant == -3:
        return CHI_M3
    raise ValueError(f"no character for discriminant {discriminant}")


def _pole(s, ell, weight_sum):
    """Pole term (value, d/ds) of sum_a w_a u_a^(1-s)/(s-1), ell = log u_a."""
    if weight_sum == 0:
        # (u^(1-s) - 1)/(s-1); the -1 cancels across a zero-sum weighting
        if s == 1:
            return -ell, ell * ell / 2
        e = mpmath.exp((1 - s) * ell)
        d = s - 1
        return (e - 1) / d, (-ell * e * d - (e - 1)) / (d * d)
    if s == 1:
        raise ValueError("pole at s = 1")
    e = mpmath.exp((1 - s) * ell)
    d = s - 1
    return e / d, -ell * e / d - e / (d * d)


def hurwitz_combination(s, terms: Sequence[Tuple[int, mpf]], dps: int, max_terms: int = 400):
    """sum_w w * zeta(s, q) and its s-derivative, with an error bound.

    ``terms`` is a list of (weight, q) with 0 < q <= 1.
    Returns (value, derivative, error_bound) as mpf.
    """
    s = mpf(s)
    wsum = sum(w for w, _ in terms)
    target = mpf(10) ** (-dps - 5)
    M = max(16, int(dps * 1.2) + 10)
    val = mpf(0)
    der = mpf(0)
    for w, q in terms:
        for n in range(M):
            u = n + q
            t = u ** (-s)
            val += w * t
            der -= w * t * mpmath.log(u)
        u = M + q
        ell = mpmath.log(u)
        pv, pd = _pole(s, ell, wsum)
        val += w * pv
        der += w * pd
        t = u ** (-s)
        val += w * t / 2
        der -= w * t * ell / 2
    # Bernoulli corrections
    err = None
    poch = s            # s(s+1)...(s+2j-2)
    dpoch = mpf(1)      # its derivative
    for j in range(1, max_terms):
        coef = mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j)
        tv = mpf(0)
        td = mpf(0)
        for w, q in terms:
            u = M + q
            ell = mpmath.log(u)
            pw = u ** (-s - 2 * j + 1)
            tv += w * coef * poch * pw
            td += w * coef * (dpoch * pw - poch * pw * ell)
        mag = max(abs(tv), abs(td))
        if mag < target:
            err = 2 * mag
            break
        val += tv
        der += td
        # extend the Pochhammer product by (s+2j-1)(s+2j)
        a, b = s + 2 * j - 1, s + 2 * j
        dpoch = dpoch * a * b + poch * (a + b)
        poch = poch * a * b
    if err is None:
        raise PrecisionError(f"Euler-Maclaurin did not reach 1e-{dps} in {max_terms} terms")
    return val, der, err


def _rounding(dps):
    return mpf(10) ** (-dps - 15)


def _with_precision(dps):
    return mpmath.workdps(dps + 20)


def zeta_with_derivative(s, dps: int = 50) -> Tuple[BigReal, BigReal]:
    """zeta(s), zeta'(s) for real s > 1."""
    if s <= 1:
        raise ValueError("zeta needs s > 1 here")
    with _with_precision(dps):
        v, d, e = hurwitz_combination(s, [(1, mpf(1))], dps)
        e += _rounding(dps)
        return BigReal(+v, e), BigReal(+d, e)


def zeta(s, dps: int = 50) -> BigReal:
    return zeta_with_derivative(s, dps)[0]


def l_chi_with_derivative(s, chi: CharacterSpec, dps: int = 50) -> Tuple[BigReal, BigReal]:
    """L(s, chi), L'(s, chi) for real s >= 1 and an odd nonprincipal chi."""
    if s < 1:
        raise ValueError("L(s, chi) is evaluated for s >= 1 only")
    k = chi.modulus
    with _with_precision(dps):
        terms = [(chi(a), mpf(a) / k) for a in range(1, k) if chi(a)]
        v, d, e = hurwitz_combination(s, terms, dps)
        e += _rounding(dps)
        ks = mpf(k) ** (-mpf(s))
        lk = mpmath.log(k)
        val = ks * v
        der = ks * d - lk * val
        return BigReal(+val, ks * e), BigReal(+der, ks * e * (1 + lk))


def l_chi(s, chi: CharacterSpec, dps: int = 50) -> BigReal:
    return l_chi_with_derivative(s, chi, dps)[0]


def log_derivative_l(s, chi: CharacterSpec, dps: int = 50) -> BigReal:
    v, d = l_chi_with_derivative(s, chi, dps)
    return d / v


def log_derivative_zeta(s, dps: int = 50) -> BigReal:
    v, d = zeta_with_derivative(s, dps)
    return d / v
