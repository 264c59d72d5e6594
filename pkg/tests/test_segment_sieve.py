import json
import math
import random

import numpy as np
import pytest

from squarehex.repr_core import B1, B3, is_representable
from squarehex.segment_sieve import (
    CSV_HEADER, Checkpoint, CheckpointError, RunningTotals, accumulate, counts_upto,
    partial_summation_check, rows_to_csv, sieve_segment, verify_conjectures,
)
from squarehex.reference import TABLE1


def _set(seg, j):
    return set(seg.members(j).tolist())


def test_sieve_examples():
    s = sieve_segment(1, 10)
    assert _set(s, 1) == {1, 2, 4, 5, 8, 9, 10}
    assert _set(s, 3) == {1, 3, 4, 7, 9}
    s = sieve_segment(1, 2)
    assert _set(s, 1) == {1, 2} and _set(s, 3) == {1}
    s = sieve_segment(5, 5)
    assert _set(s, 1) == {5} and _set(s, 3) == set()


def test_sieve_range_errors():
    with pytest.raises(ValueError):
        sieve_segment(0, 5)
    with pytest.raises(ValueError):
        sieve_segment(10, 5)
    with pytest.raises(OverflowError):
        sieve_segment(1 << 62, (1 << 62) + 1)


def test_oracle_equivalence_random_segments():
    rng = random.Random(20260101)
    for _ in range(10):
        lo = rng.randrange(1, 10 ** 9 - 10 ** 4)
        seg = sieve_segment(lo, lo + 10 ** 4 - 1)
        for k in range(10 ** 4):
            n = lo + k
            assert bool(seg.bits1[k]) == is_representable(n, B1)
            assert bool(seg.bits3[k]) == is_representable(n, B3)


def test_accumulate_examples():
    t = accumulate(sieve_segment(1, 1 << 10), RunningTotals())
    assert (t.count1, t.count3) == (337, 282)
    t = accumulate(sieve_segment(1, 8), RunningTotals())
    assert t.lam1.value == pytest.approx(math.log(320), abs=1e-13)
    assert t.lam3.value == pytest.approx(math.log(84), abs=1e-13)
    t = accumulate(sieve_segment(1, 1), RunningTotals())
    assert (t.count1, t.count3) == (1, 1)
    assert t.lam1.value == 0.0 and t.lam3.value == 0.0


def test_accumulate_rejects_gap():
    t = accumulate(sieve_segment(1, 100), RunningTotals())
    with pytest.raises(ValueError):
        accumulate(sieve_segment(102, 200), t)


def test_accumulate_chain_matches_single_pass():
    t = RunningTotals()
    for lo in range(1, 5001, 777):
        t = accumulate(sieve_segment(lo, min(lo + 776, 5000)), t)
    u = accumulate(sieve_segment(1, 5000), RunningTotals())
    assert (t.count1, t.count3) == (u.count1, u.count3)
    assert t.mu1.value == pytest.approx(u.mu1.value, rel=1e-15)


def test_verify_small_x():
    rep = verify_conjectures(4, workers=1)
    assert (rep.totals.count1, rep.totals.count3) == (3, 3)
    assert rep.ok


def test_lambda_exceptions_below_8():
    rep = verify_conjectures(100, workers=1)
    assert 7 in rep.lambda_exceptions_below_8
    assert all(x < 8 for x in rep.lambda_exceptions_below_8)
    r = verify_conjectures(7, workers=1, samples=[7]).table_rows[0]
    assert r.lambda1 == pytest.approx(math.log(40), abs=1e-13)
    assert r.lambda3 == pytest.approx(math.log(84), abs=1e-13)
    assert rep.conjecture2_ok


def test_power_of_two_rows_to_2_20():
    rep = verify_conjectures(1 << 20, workers=1)
    assert rep.ok
    for r in rep.table_rows:
        assert (r.B1, r.B3) == TABLE1[r.x]


def test_monotone_counters():
    b1 = counts_upto(20000, 1)
    b3 = counts_upto(20000, 3)
    assert np.all(np.diff(b1) >= 0) and np.all(np.diff(b3) >= 0)
    assert np.all(b1 >= b3)


def test_determinism_across_workers():
    reps = [verify_conjectures(10 ** 7, segment_len=1 << 18, workers=w) for w in (1, 4, 16)]
    ref = json.dumps(reps[0].to_json(), sort_keys=True)
    for r in reps[1:]:
        assert json.dumps(r.to_json(), sort_keys=True) == ref
        assert r.table_rows == reps[0].table_rows


@pytest.mark.parametrize("fmt", ["binary", "json"])
def test_checkpoint_resume_identical(tmp_path, fmt):
    seg = 1 << 12
    full = verify_conjectures(1 << 17, segment_len=seg, workers=2)
    ck = Checkpoint(tmp_path / "ck", fmt)
    verify_conjectures(1 << 15, segment_len=seg, workers=2, checkpoint=ck, checkpoint_every=1)
    resumed = verify_conjectures(1 << 17, segment_len=seg, workers=2,
                                 checkpoint=Checkpoint(tmp_path / "ck", fmt), resume=True,
                                 checkpoint_every=1)
    assert json.dumps(resumed.to_json(), sort_keys=True) == json.dumps(full.to_json(), sort_keys=True)
    assert resumed.table_rows == full.table_rows


def test_checkpoint_corruption_detected(tmp_path):
    seg = 1 << 12
    path = tmp_path / "ck"
    verify_conjectures(1 << 14, segment_len=seg, workers=1, checkpoint=Checkpoint(path), checkpoint_every=1)
    raw = bytearray(path.read_bytes())
    raw[-40] ^= 0xFF
    path.write_bytes(bytes(raw))
    with pytest.raises(CheckpointError):
        verify_conjectures(1 << 15, segment_len=seg, workers=1, checkpoint=Checkpoint(path), resume=True)


def test_checkpoint_segment_len_mismatch(tmp_path):
    path = tmp_path / "ck"
    verify_conjectures(1 << 14, segment_len=1 << 12, workers=1, checkpoint=Checkpoint(path), checkpoint_every=1)
    with pytest.raises(CheckpointError):
        verify_conjectures(1 << 15, segment_len=1 << 13, workers=1, checkpoint=Checkpoint(path), resume=True)


def test_csv_format():
    rep = verify_conjectures(64, workers=1)
    text = rows_to_csv(rep.table_rows, 3)
    lines = text.strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert lines[-1].startswith("64,29,25,")
    assert len(lines[-1].split(",")[3].split(".")[1]) == 3
    assert len(rows_to_csv(rep.table_rows, 15).split("\n")[1].split(",")[3].split(".")[1]) == 15


def test_partial_summation():
    assert partial_summation_check(2) == pytest.approx(0.0, abs=1e-15)
    assert partial_summation_check(1000) <= 1e-9
    assert partial_summation_check(10 ** 6) <= 1e-6
