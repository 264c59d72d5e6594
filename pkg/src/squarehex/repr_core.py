"""Exact arithmetic for the forms X^2 + Y^2 and X^2 + 3Y^2.

Everything here works one integer at a time through its factorization. It is
slow compared to the sieves, which is the point: these functions are the
reference the sieves are tested against.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

Factorization = List[Tuple[int, int]]

_MAX_N = (1 << 63) - 1
_TRIAL_LIMIT = 1000


@dataclass(frozen=True)
class FormClass:
    """Residue data of the form X^2 + jY^2 for j in {1, 3}."""

    j: int
    special_prime: int
    split_residue: int
    inert_residue: int
    modulus: int

    def __post_init__(self):
        if self.j not in (1, 3):
            raise ValueError(f"unsupported form X^2+{self.j}Y^2")
        if self.split_residue == self.inert_residue:
            raise ValueError("split and inert residues must differ")

    def is_split(self, p: int) -> bool:
        return p % self.modulus == self.split_residue

    def is_inert(self, p: int) -> bool:
        return p % self.modulus == self.inert_residue

    @property
    def name(self) -> str:
        return f"b{self.j}"


B1 = FormClass(j=1, special_prime=2, split_residue=1, inert_residue=3, modulus=4)
B3 = FormClass(j=3, special_prime=3, split_residue=1, inert_residue=2, modulus=3)


def form_class(j: int) -> FormClass:
    if j == 1:
        return B1
    if j == 3:
        return B3
    raise ValueError(f"unsupported form X^2+{j}Y^2")


@lru_cache(maxsize=1)
def _small_primes() -> Tuple[int, ...]:
    flags = bytearray([1]) * (_TRIAL_LIMIT + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(_TRIAL_LIMIT) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return tuple(i for i, f in enumerate(flags) if f)


# Deterministic for n < 3.3e24 (Sorenson & Webster), which covers 64 bits.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _small_primes():
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    """A nontrivial factor of the odd composite n."""
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> Factorization:
    """Canonical factorization [(p, e), ...] with p increasing."""
    if n < 1 or n > _MAX_N:
        raise ValueError(f"factorize expects 1 <= n <= 2^63-1, got {n}")
    out: dict = {}
    for p in _small_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        rng = random.Random(n)
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if is_prime(m):
                out[m] = out.get(m, 0) + 1
                continue
            d = _pollard_brent(m, rng)
            stack.extend((d, m // d))
    return sorted(out.items())


def is_representable(n: int, c: FormClass) -> bool:
    """True iff n = X^2 + jY^2: inert primes must occur to even powers."""
    if n < 1:
        raise ValueError("n must be positive")
    return all(e % 2 == 0 for p, e in factorize(n) if c.is_inert(p))


def mangoldt_f(n: int, c: FormClass) -> float:
    """Coefficient of -L'/L for the indicator of representable integers."""
    if n < 2:
        return 0.0
    fac = factorize(n)
    if len(fac) != 1:
        return 0.0
    p, e = fac[0]
    if c.is_inert(p):
        return 2.0 * math.log(p) if e % 2 == 0 else 0.0
    return math.log(p)


def sigma1(n: int) -> int:
    total = 1
    for p, e in factorize(n):
        total *= (p ** (e + 1) - 1) // (p - 1)
    return total


def tau_char(n: int) -> int:
    """1 if 3 does not divide Ramanujan's tau(n), else 0 (tau = n*sigma_1 mod 3)."""
    return 0 if (n * sigma1(n)) % 3 == 0 else 1


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def sigma0(k: int) -> int:
    """Product of the distinct primes dividing k to an odd power."""
    if k < 1:
        raise ValueError("k must be positive")
    out = 1
    for p, e in factorize(k):
        if e % 2:
            out *= p
    return out
