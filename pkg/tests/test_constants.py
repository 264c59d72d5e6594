import math

import mpmath
import pytest
from mpmath import mpf

from squarehex.bigreal import BigReal
from squarehex.constants import (
    compute_constants, doubling_identity_residual, inert_prime_sum, landau_product_direct,
    landau_ramanujan, log_inert_factor, ramanujan_tau, second_order,
)
from squarehex.lfunctions import (
    CHI_M3, CHI_M4, CharacterSpec, character, l_chi, l_chi_with_derivative, zeta,
    zeta_with_derivative,
)
from squarehex.primes import primes_upto
from squarehex.reference import CONSTANTS
from squarehex.repr_core import B1, B3


def close(b: BigReal, ref, tol):
    with mpmath.workdps(60):
        return abs(b.value - mpf(ref)) <= mpf(tol)


@pytest.fixture(scope="module")
def cs():
    return compute_constants(50)


def test_zeta_two():
    with mpmath.workdps(60):
        z = zeta(2, 50)
        assert abs(z.value - mpmath.pi ** 2 / 6) < mpf(10) ** -48
        assert z.err < mpf(10) ** -48


def test_zeta_derivative_against_library():
    with mpmath.workdps(60):
        for s in (2, 3.5, 8):
            v, d = zeta_with_derivative(s, 40)
            assert abs(v.value - mpmath.zeta(s)) < mpf(10) ** -38
            assert abs(d.value - mpmath.zeta(s, derivative=1)) < mpf(10) ** -38


def test_l_at_one_closed_forms():
    with mpmath.workdps(60):
        assert abs(l_chi(1, CHI_M4, 40).value - mpmath.pi / 4) < mpf(10) ** -38
        assert abs(l_chi(1, CHI_M3, 40).value - mpmath.pi / mpmath.sqrt(27)) < mpf(10) ** -38


def test_l_two_catalan():
    with mpmath.workdps(60):
        v = l_chi(2, CHI_M4, 40)
        assert abs(v.value - mpmath.catalan) < mpf(10) ** -38
        assert v.to_str(20) == "0.91596559417721901505"


@pytest.mark.parametrize("chi", [CHI_M3, CHI_M4])
@pytest.mark.parametrize("s", [1, 2, 4])
def test_l_derivative_against_hurwitz(chi, s):
    # L(s) = k^-s sum_a chi(a) zeta(s, a/k); at s = 1 the pole cancels and the
    # Laurent coefficients of zeta(s, a) are the generalized Stieltjes constants
    k = chi.modulus
    with mpmath.workdps(50):
        if s == 1:
            val = sum(chi(a) * mpmath.stieltjes(0, mpf(a) / k) for a in range(1, k)) / k
            ref_d = -sum(chi(a) * mpmath.stieltjes(1, mpf(a) / k) for a in range(1, k)) / k \
                - mpmath.log(k) * val
        else:
            ks = mpf(k) ** -s
            ref_d = ks * sum(chi(a) * mpmath.zeta(s, mpf(a) / k, 1) for a in range(1, k)) \
                - mpmath.log(k) * ks * sum(chi(a) * mpmath.zeta(s, mpf(a) / k) for a in range(1, k))
        _, d = l_chi_with_derivative(s, chi, 30)
        assert abs(d.value - ref_d) < mpf(10) ** -25


def test_l_derivative_slow_oracle():
    # L'(1, chi_-4) = -sum chi(n) log n / n, paired terms, to about 6 digits
    acc = 0.0
    for m in range(1, 2_000_001, 4):
        acc += math.log(m + 2) / (m + 2) - math.log(m) / m
    _, d = l_chi_with_derivative(1, CHI_M4, 30)
    assert abs(float(d.value) - acc) < 1e-5


def test_character_invariants():
    for chi in (CHI_M3, CHI_M4):
        k = chi.modulus
        assert sum(chi(a) for a in range(k)) == 0
        assert chi(-1) == -1
        for a in range(3 * k):
            assert chi(a + k) == chi(a)
    assert character(-4) is CHI_M4
    with pytest.raises(ValueError):
        character(-7)
    with pytest.raises(ValueError):
        CharacterSpec(-5, 5, (0, 1, 1, 1, 1))


def test_landau_ramanujan_digits(cs):
    assert close(cs.C_b1, CONSTANTS["C_b1"], 1e-20)
    assert close(cs.C_b3, CONSTANTS["C_b3"], 1e-20)
    assert cs.C_b1.to_str(20) == CONSTANTS["C_b1"]
    assert cs.C_b3.to_str(20) == CONSTANTS["C_b3"]
    assert close(cs.ratio, CONSTANTS["ratio"], 1e-10)


def test_second_order_digits(cs):
    assert close(cs.B_b1, CONSTANTS["B_b1"], 1e-18)
    assert close(cs.B_b3, CONSTANTS["B_b3"], 1e-18)
    assert close(cs.C2_b1, CONSTANTS["C2_b1"], 1e-18)
    assert close(cs.C2_b3, CONSTANTS["C2_b3"], 1e-18)
    with mpmath.workdps(60):
        assert abs(cs.C2_b1.value - (1 + cs.B_b1.value) / 2) < mpf(10) ** -45
        assert cs.B_b3.value < mpmath.log(3) / 2


def test_ramanujan_tau(cs):
    assert cs.B_T.to_str(2) == "-0.53"
    assert cs.second_coeff_T.to_str(2) == "0.23"
    assert cs.B_T.value < 0 and cs.B_T.digits >= 2


def test_ramanujan_tau_direct_route():
    c, bt, _ = ramanujan_tau(30)
    _, bt_direct, _ = ramanujan_tau(30, direct_cutoff=10 ** 5)
    assert abs(bt.value - bt_direct.value) <= bt_direct.err


def test_ramanujan_C_direct_product():
    # the absolutely convergent product over p = 1 and p = 2 mod 3
    c, _, _ = ramanujan_tau(30)
    acc = mpf(0)
    for p in primes_upto(10 ** 6).tolist():
        p = mpf(p)
        if int(p) % 3 == 1:
            acc += mpmath.log1p(-p ** -2) - mpmath.log1p(-p ** -3)
        elif int(p) % 3 == 2:
            acc -= mpmath.log1p(-p ** -2) / 2
    direct = mpmath.sqrt(2) / mpf(3) ** 0.25 * mpmath.exp(acc)
    assert abs(float(c.value) - float(direct)) < 1e-6


def test_landau_product_crosscheck(cs):
    assert abs(landau_product_direct(10 ** 6) - float(cs.C_b1.value)) < 1e-6


@pytest.mark.parametrize("fc", [B1, B3])
def test_doubling_identity(fc):
    assert doubling_identity_residual(fc, 1, cutoff=5000) < 5e-4
    assert doubling_identity_residual(fc, 1, cutoff=20000) < doubling_identity_residual(fc, 1, cutoff=5000)


@pytest.mark.parametrize("fc", [B1, B3])
def test_levels_agree(fc):
    a = log_inert_factor(fc, 1, 4, 40)
    b = log_inert_factor(fc, 1, 7, 40)
    assert abs(a.value - b.value) <= a.err + b.err
    q = inert_prime_sum(fc, 1, 3, 40)
    r = inert_prime_sum(fc, 1, 6, 40)
    assert abs(q.value - r.value) <= q.err + r.err


def test_certified_digits_never_exceed_error(cs):
    d = cs.to_dict(30)
    for name, entry in d.items():
        assert entry["certified_digits"] <= 30
        b = getattr(cs, name)
        assert b.err < mpf(10) ** -entry["certified_digits"]


def test_bad_levels():
    with pytest.raises(ValueError):
        log_inert_factor(B1, 1, 0)
    with pytest.raises(ValueError):
        inert_prime_sum(B1, 1, 0)
