import math

import numpy as np
import pytest

from squarehex.chebyshev import (
    PSI_B1_FROM, PSI_B1_SLOPE, PSI_B3_FROM, S_B3, EventTable, ThresholdNotReached,
    check_envelopes, h_direct, h_extrema, h_threshold_scan, mertens_sum, prime_power_stream,
    prime_square_tail, psi_f,
)
from squarehex.reference import H_MAX
from squarehex.repr_core import B1, B3, mangoldt_f
from squarehex.segment_sieve import verify_conjectures, representable_upto

L2, L3, L5 = math.log(2), math.log(3), math.log(5)


def _events(fc, bound):
    return [(e.n, e.weight) for e in prime_power_stream(fc, bound)]


def test_stream_examples():
    got = _events(B1, 10)
    assert [n for n, _ in got] == [2, 4, 5, 8, 9]
    assert np.allclose([w for _, w in got], [L2, L2, L5, L2, 2 * L3], atol=1e-15)
    got = _events(B3, 4)
    assert [n for n, _ in got] == [3, 4]
    assert np.allclose([w for _, w in got], [L3, 2 * L2], atol=1e-15)
    assert [n for n, _ in _events(B1, 2)] == [2]


@pytest.mark.parametrize("fc", [B1, B3])
def test_stream_matches_mangoldt(fc):
    ev = dict(_events(fc, 20000))
    for n in range(1, 20001):
        w = mangoldt_f(n, fc)
        if w:
            assert ev[n] == pytest.approx(w, abs=1e-14)
        else:
            assert n not in ev


def test_stream_across_segments():
    from squarehex.chebyshev import event_chunks

    n = np.concatenate([c[0] for c in event_chunks(B1, 300000, seg_len=4096)])
    ref = EventTable.build(B1, 300000).n
    assert np.array_equal(n, ref)
    assert np.all(np.diff(n) > 0)


def test_psi_examples():
    assert psi_f(1, B1) == 0.0
    assert psi_f(10, B1) == pytest.approx(3 * L2 + L5 + 2 * L3, abs=1e-14)
    assert psi_f(3, B3) == pytest.approx(L3, abs=1e-15)


def test_h_extrema_examples():
    for fc in (B1, B3):
        r = h_extrema(fc, 10 ** 6)
        loc, val = H_MAX[fc.j]
        assert r.location == loc
        assert abs(r.value - val) <= 1e-12
        assert abs(h_direct(loc, fc) - r.value) <= 1e-12
    r = h_extrema(B1, 2)
    assert r.location == 2 and r.value == pytest.approx(0.0, abs=1e-15)


def test_h_floor():
    for fc, floor in ((B1, -math.log(2) / 2), (B3, -math.log(3) / 2)):
        r = h_extrema(fc, 10 ** 6)
        assert r.min_left_value >= floor - 1e-15
        assert r.min_left_value == pytest.approx(floor, abs=1e-15)


def test_threshold_examples():
    assert h_threshold_scan(B3, 0.0, 10 ** 5) == 25
    assert h_threshold_scan(B1, 0.065, 10 ** 5) == 97
    assert h_threshold_scan(B1, -1.0, 10 ** 3) == 2


def test_threshold_not_reached():
    with pytest.raises(ThresholdNotReached):
        h_threshold_scan(B1, 0.3, 10 ** 4)


def test_envelope_examples():
    assert psi_f(3, B3) <= S_B3.slope(3) * 3
    assert S_B3.slope(3) == pytest.approx(0.653954)
    assert psi_f(37, B1) > PSI_B1_SLOPE * 37
    assert psi_f(2, B3) == 0.0 <= S_B3.slope(2) * 2


def test_envelope_spec_shape():
    iv = S_B3.intervals
    assert len(iv) == 7
    assert all(a[1] <= b[0] for a, b in zip(iv, iv[1:]))
    assert S_B3.slope(1500) == S_B3.default_slope == 0.5176


def test_check_envelopes_small():
    rep = check_envelopes(10 ** 5)
    assert rep.ok
    assert all(c.min_slack > 0 for c in rep.checks)
    with pytest.raises(ValueError):
        check_envelopes(PSI_B3_FROM - 1)


@pytest.mark.parametrize("fc", [B1, B3])
@pytest.mark.parametrize("x", [10 ** 3, 10 ** 4, 10 ** 5])
def test_lambda_psi_identity(fc, x):
    t = EventTable.build(fc, x)
    b = representable_upto(x, fc.j)
    rhs = math.fsum(t.psi_at(x // n) for n in range(1, x + 1) if b[n])
    lam = verify_conjectures(x, workers=1, samples=[x]).table_rows[0]
    lhs = lam.lambda1 if fc.j == 1 else lam.lambda3
    assert abs(lhs - rhs) <= 1e-8 * lhs


@pytest.mark.parametrize("modulus,residue", [(4, 1), (4, 3), (3, 1), (3, 2)])
@pytest.mark.parametrize("x", [289, 10 ** 4, 10 ** 6])
def test_prime_square_tail(modulus, residue, x):
    s, rest = prime_square_tail(x, modulus, residue, cutoff=10 ** 6)
    assert s + rest <= 1.3 / math.sqrt(x)


def test_h_tracks_second_order_constant():
    from squarehex.reference import CONSTANTS

    t = EventTable.build(B1, 10 ** 8)
    h = t.h_at(1e8)
    assert abs(h - float(CONSTANTS["B_b1"])) <= 0.11


def test_mertens_consistency():
    x = 10 ** 8
    assert abs(mertens_sum(x) - math.log(x) + 0.5772156649015329) <= 0.02


def test_csv_dump():
    text = EventTable.build(B3, 30).to_csv()
    lines = text.strip().split("\n")
    assert lines[0] == "n,Lambda,psi,H"
    assert lines[1].startswith("3,")
