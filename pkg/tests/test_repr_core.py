import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from squarehex.repr_core import (
    B1, B3, factorize, form_class, is_prime, is_representable, mangoldt_f, sigma1, tau_char,
)


def test_factorize_examples():
    assert factorize(1) == []
    assert factorize(12) == [(2, 2), (3, 1)]
    assert factorize(461) == [(461, 1)]


def test_factorize_large_semiprime():
    p, q = 1_000_000_007, 998_244_353
    assert factorize(p * q) == [(q, 1), (p, 1)]
    assert factorize((1 << 61) - 1) == [((1 << 61) - 1, 1)]


@given(st.integers(min_value=1, max_value=(1 << 63) - 1))
@settings(max_examples=200, deadline=None)
def test_factorize_roundtrip(n):
    f = factorize(n)
    prod = 1
    last = 1
    for p, e in f:
        assert p > last and e >= 1 and is_prime(p)
        prod *= p ** e
        last = p
    assert prod == n


def test_factorize_rejects_out_of_range():
    with pytest.raises(ValueError):
        factorize(0)
    with pytest.raises(ValueError):
        factorize(1 << 63)


def test_form_class_fields():
    assert B1.modulus == 4 and B3.modulus == 3
    assert B1.special_prime == 2 and B3.special_prime == 3
    assert form_class(1) is B1 and form_class(3) is B3
    with pytest.raises(ValueError):
        form_class(2)


def test_is_representable_examples():
    assert not is_representable(3, B1)
    assert is_representable(9, B1)
    assert is_representable(1, B3)
    assert not is_representable(2, B3)


def test_representable_against_brute_force():
    n_max = 3000
    sq = np.zeros(n_max + 1, bool)
    hx = np.zeros(n_max + 1, bool)
    r = math.isqrt(n_max)
    for x in range(r + 1):
        for y in range(r + 1):
            if x * x + y * y <= n_max:
                sq[x * x + y * y] = True
            if x * x + 3 * y * y <= n_max:
                hx[x * x + 3 * y * y] = True
    for n in range(1, n_max + 1):
        assert is_representable(n, B1) == sq[n]
        assert is_representable(n, B3) == hx[n]


def test_mangoldt_examples():
    assert mangoldt_f(9, B1) == pytest.approx(2 * math.log(3), abs=1e-15)
    assert mangoldt_f(2, B1) == pytest.approx(math.log(2), abs=1e-15)
    assert mangoldt_f(6, B1) == 0.0
    assert mangoldt_f(3, B3) == pytest.approx(math.log(3), abs=1e-15)
    assert mangoldt_f(1, B1) == 0.0
    assert mangoldt_f(27, B1) == 0.0


def test_tau_char_examples():
    assert tau_char(1) == 1
    assert tau_char(2) == 0
    assert tau_char(7) == 1


def test_tau_char_matches_ramanujan_tau():
    # tau(n) for n <= 12 from the q-expansion of Delta
    tau = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944]
    for n, t in enumerate(tau, start=1):
        assert tau_char(n) == (0 if t % 3 == 0 else 1)


@pytest.mark.parametrize("fc", [B1, B3])
def test_multiplicativity(fc):
    n_max = 10 ** 4
    b = np.array([0] + [int(is_representable(n, fc)) for n in range(1, n_max + 1)])
    t = np.array([0] + [tau_char(n) for n in range(1, n_max + 1)])
    for m in range(1, 101):
        for n in range(1, n_max // m + 1):
            if math.gcd(m, n) == 1:
                assert b[m * n] == b[m] * b[n]
                assert t[m * n] == t[m] * t[n]


@pytest.mark.parametrize("fc", [B1, B3])
def test_convolution_identity(fc):
    n_max = 10 ** 4
    b = [0] + [int(is_representable(n, fc)) for n in range(1, n_max + 1)]
    lam = [0.0] + [mangoldt_f(n, fc) for n in range(1, n_max + 1)]
    rhs = [0.0] * (n_max + 1)
    for d in range(1, n_max + 1):
        if b[d]:
            for m in range(1, n_max // d + 1):
                if lam[m]:
                    rhs[d * m] += lam[m]
    for n in range(1, n_max + 1):
        assert abs(b[n] * math.log(n) - rhs[n]) <= 1e-12


@pytest.mark.parametrize("fc", [B1, B3])
def test_generator_property(fc):
    for n in range(2, 10 ** 5 + 1, 7):
        f = factorize(n)
        expect = len(f) == 1 and is_representable(n, fc)
        assert (mangoldt_f(n, fc) != 0) == expect


def test_tau_euler_product_coefficients():
    # multiply out the local factors as truncated Dirichlet series
    from squarehex.primes import primes_upto

    n_max = 10 ** 4
    coef = np.zeros(n_max + 1, dtype=np.int64)
    coef[1] = 1
    for p in primes_upto(n_max).tolist():
        if p == 3:
            continue
        if p % 3 == 2:
            local = {p ** (2 * k): 1 for k in range(20) if p ** (2 * k) <= n_max}
        else:
            # (1 + p^-s)/(1 - p^-3s): exponents 0, 1 mod 3
            local = {p ** e: 1 for e in range(40) if p ** e <= n_max and e % 3 != 2}
        new = np.zeros_like(coef)
        for q, c in local.items():
            new[q::q][: n_max // q] += c * coef[1: n_max // q + 1]
        coef = new
    for n in range(1, n_max + 1):
        assert coef[n] == tau_char(n), n


def test_sigma1_small():
    assert [sigma1(n) for n in range(1, 7)] == [1, 3, 4, 7, 6, 12]
