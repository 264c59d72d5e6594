import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from squarehex.repr_core import B1, B3, factorize, is_representable, mobius, sigma0
from squarehex.selberg import (
    C2, C3, EULER_GAMMA, F_OSC, G_OSC, ONE_MOD_3, ONE_MOD_4, P2, P2_PRIME, P3, P3_PRIME,
    BudgetExceeded, Tables, crossover, em_harmonic_check, explicit_bound_check,
    functional_residual, functional_terms, h_convolution_check, h_values, mobius_sigma0_identity,
    osc_eval, osc_limit_gap, osc_sup, osc_sup_closed_form, psi_split_bound, reconstruct_B,
    semigroup_count, term_bound_check,
)
from squarehex.segment_sieve import counts_upto


def test_sigma0_examples():
    assert sigma0(12) == 3
    assert sigma0(36) == 1
    assert sigma0(8) == 2
    assert sigma0(1) == 1


@given(st.integers(1, 10 ** 9))
@settings(max_examples=200, deadline=None)
def test_sigma0_squarefree_quotient(k):
    s = sigma0(k)
    assert mobius(s) != 0
    q = k // s
    assert k % s == 0 and math.isqrt(q) ** 2 == q


def test_semigroup_examples():
    # the listed sets {1,3,7,9} and {1,2,4,5,8,10} are the p = 3 mod 4 and p = 2 mod 3 semigroups
    assert semigroup_count(10, P3) == 4
    assert semigroup_count(10, P2) == 6
    assert semigroup_count(1, ONE_MOD_4) == 1
    assert semigroup_count(1, P3) == 1


def test_split_semigroup_counts():
    assert [n for n in range(1, 60) if ONE_MOD_4.contains(n)] == [1, 5, 13, 17, 25, 29, 37, 41, 53]
    assert semigroup_count(10, ONE_MOD_4) == 2
    assert semigroup_count(10, ONE_MOD_3) == 2


@pytest.mark.parametrize("spec", [P2, P3, P2_PRIME, P3_PRIME, ONE_MOD_3, ONE_MOD_4])
def test_semigroup_sieve_matches_predicate(spec):
    t = Tables(3000)
    mem = t.member(spec)
    for n in range(1, 3001):
        assert bool(mem[n]) == spec.contains(n)
    assert spec.contains(1)


@given(st.integers(1, 300), st.integers(1, 300))
@settings(max_examples=200, deadline=None)
def test_semigroup_multiplicative(a, b):
    for spec in (P2, P3, P2_PRIME, P3_PRIME):
        if spec.contains(a) and spec.contains(b):
            assert spec.contains(a * b)


def test_osc_definitions():
    assert osc_eval(1, F_OSC) == pytest.approx(1 - (math.log(2) + EULER_GAMMA) / 2, abs=1e-15)
    assert osc_eval(1, F_OSC) == pytest.approx(0.3648, abs=1e-4)
    z = 7.3
    h = sum(1 / n for n in range(1, 8) if n % 3)
    assert osc_eval(z, G_OSC) == pytest.approx(z * h - 2 * z / 3 * math.log(C3 * z), rel=1e-14)
    assert C2 == pytest.approx(2 * math.exp(EULER_GAMMA))


def test_osc_sups():
    loc, val = osc_sup(F_OSC)
    assert loc == "3-" and abs(val - 0.55346270119438) <= 1e-11
    loc, val = osc_sup(G_OSC)
    assert loc == "4-" and abs(val - 0.70084312094794) <= 1e-11
    assert osc_sup(F_OSC)[1] == pytest.approx(osc_sup_closed_form(F_OSC), abs=1e-14)
    assert osc_sup(G_OSC)[1] == pytest.approx(osc_sup_closed_form(G_OSC), abs=1e-14)


def test_osc_sup_interior_reduction():
    zs = np.linspace(1.0, 11.0, 200001)
    vals = [abs(osc_eval(z, F_OSC)) for z in zs]
    assert max(vals) <= osc_sup(F_OSC, cutoff=11)[1] + 1e-12
    assert osc_sup(F_OSC, cutoff=11) == osc_sup(F_OSC, cutoff=50)


@pytest.mark.parametrize("w", [F_OSC, G_OSC])
def test_almost_periodicity(w):
    assert osc_limit_gap(w, 1e5) < osc_limit_gap(w, 1e2)


@pytest.mark.parametrize("n", [1, 2, 10, 100, 2001, 10 ** 6])
def test_euler_maclaurin_theta(n):
    assert 0.0 <= em_harmonic_check(n) <= 1.0


def test_h_examples():
    h = h_values(100, 1)
    assert h[9] == 1 and h[3] == 0
    assert h_convolution_check(100)


@pytest.mark.parametrize("j", [1, 3])
def test_h_equals_b(j):
    assert h_convolution_check(10 ** 5, j)


def test_h_direct_divisor_sum():
    # h(k) = sum over d n = k, d in (P3'), n odd, of mu(sigma0(odd part of d))
    for k in range(1, 400):
        tot = 0
        for d in range(1, k + 1):
            if k % d or not P3_PRIME.contains(d) or (k // d) % 2 == 0:
                continue
            odd = d
            while odd % 2 == 0:
                odd //= 2
            tot += mobius(sigma0(odd))
        assert tot == int(is_representable(k, B1))


@pytest.mark.parametrize("x", [10 ** 2, 10 ** 3, 10 ** 4])
def test_reconstruct_B1(x):
    assert reconstruct_B(x, 1) == int(counts_upto(x, 1)[x])
    assert reconstruct_B(x, 3) == int(counts_upto(x, 3)[x])


def test_mobius_sigma0_identity():
    assert mobius_sigma0_identity(10 ** 4)


def test_functional_examples():
    assert functional_residual(2, B1) <= 1e-10
    assert functional_residual(1000, B1) / 1000 <= 1e-10
    assert functional_residual(10 ** 4, B3) / 10 ** 4 <= 1e-10


def test_functional_log_spaced():
    t = Tables(10 ** 4)
    for x in sorted({int(round(v)) for v in np.geomspace(2, 10 ** 4, 50)}):
        for j in (1, 3):
            ft = functional_terms(x, j, t)
            assert ft.residual / x <= 1e-9, (x, j)


def test_functional_budget():
    with pytest.raises(BudgetExceeded):
        functional_terms(10 ** 5 + 1, 1)


def test_term_bounds():
    rep = term_bound_check(10 ** 4)
    assert rep.ok, rep.violations
    ft = functional_terms(2, 1)
    assert ft.I1 == 0.0


def test_psi4_sharp_bound():
    assert semigroup_count(100, ONE_MOD_4) <= psi_split_bound(100) == 17


def test_explicit_bounds():
    rep = explicit_bound_check(10 ** 6)
    assert rep.ok
    assert rep.worst["b1"] < 9.62 / 4 and rep.worst["b3"] < 8.53 / 4
    from squarehex.bounds import landau_constant
    c1 = landau_constant(B1)
    assert abs(2 - c1 * 2 / math.sqrt(math.log(2))) <= 9.62 * 2 / math.log(2)


def test_crossover():
    assert abs(crossover() - 9111) <= 1
    assert crossover(9.62 / 2, 8.53 / 2) == pytest.approx(crossover() / 4, rel=1e-12)
    assert abs(crossover(9.62 / 2, 8.53 / 2) - 2278) <= 1
    assert crossover(c1=0.7, c3=0.7) == math.inf
