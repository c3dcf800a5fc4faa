import itertools
import json
import math

import numpy as np
import pytest

from asymauto import (
    Checkpoints,
    Verdict,
    cobham_report,
    enumerate_smooth,
    multiplicatively_independent,
    periodic,
    periodic_fit,
    periodic_fit_sweep,
    seq_run_parity,
    seq_sqrt_parity,
    seq_two_three,
    sequence_values,
    shift_invariance,
)
from asymauto.cobham import fits_to_csv

CPS16 = Checkpoints.geometric(1 << 8, 1 << 16)


def two_three():
    return seq_two_three(enumerate_smooth(1 << 24))


def test_shift_invariance_periodic():
    res = shift_invariance(periodic([0, 1]), 2, CPS16)
    assert all(c == 0 for c in res.profile.counts)
    assert res.verdict is Verdict.EQUAL
    with pytest.raises(ValueError):
        shift_invariance(periodic([0, 1]), 0, CPS16)


def test_shift_invariance_two_three():
    res = shift_invariance(two_three(), 1, Checkpoints.geometric(1 << 10, 1 << 20))
    assert res.profile.counts[-1] == 104
    assert res.verdict is Verdict.EQUAL


def test_shift_invariance_sqrt_parity():
    cps = Checkpoints.geometric(1 << 10, 10**6)
    res = shift_invariance(seq_sqrt_parity(), 1, cps)
    # parity flips exactly when n+1 is a perfect square
    assert res.profile.counts[-1] == math.isqrt(10**6) == 1000
    assert res.profile.counts[-1] <= 1001
    assert res.verdict is Verdict.EQUAL


def test_periodic_fit_exact_recovery():
    fit = periodic_fit(periodic([0, 1, 1]), 3, 1 << 12)
    assert fit.symbols == (0, 1, 1)
    assert fit.profile.counts[-1] == 0
    assert fit.min_margin == 1.0
    assert fit.verdict is Verdict.EQUAL


def test_periodic_fit_two_three_resists():
    fits = periodic_fit_sweep(two_three(), 16, 1 << 16, CPS16)
    assert min(p.fit_fraction for p in fits) >= 0.1
    assert all(p.verdict is Verdict.DISTINCT for p in fits)


def test_periodic_fit_sqrt_parity_single_residue():
    n = 10**4
    fit = periodic_fit(seq_sqrt_parity(), 1, n, Checkpoints.geometric(1 << 8, n))
    # exact count oracle: minority share of the two parities on [0, n)
    odd = sum(math.isqrt(i) & 1 for i in range(n))
    assert fit.profile.counts[-1] == min(odd, n - odd)
    assert abs(fit.fit_fraction - 0.5) < 0.02


def test_majority_fit_is_pointwise_optimal():
    # no period-q value list beats the majority vote on the fitting prefix
    n = 10**4
    for f in (seq_run_parity(), periodic([0, 1, 1, 0, 1])):
        table = sequence_values(f, n)
        for q in range(1, 5):
            fit = periodic_fit(f, q, n, Checkpoints((n,)))
            fit_count = fit.profile.counts[-1]
            residues = np.arange(n) % q
            for cand in itertools.product((0, 1), repeat=q):
                cand_arr = np.array(cand, dtype=np.uint8)
                count = int(np.count_nonzero(table != cand_arr[residues]))
                assert fit_count <= count


def test_fit_fraction_capped_by_alphabet():
    for q in (1, 2, 5):
        fit = periodic_fit(seq_run_parity(), q, 1 << 14)
        assert fit.fit_fraction <= 1 - 1 / 2


def test_shift_telescoping_bound():
    n = 1 << 16
    for f in (two_three(), seq_sqrt_parity(), periodic([0, 1, 1])):
        vals = sequence_values(f, n + 9)
        c1 = int(np.count_nonzero(vals[: n + 1][:-1] != vals[1 : n + 1]))
        for q in range(1, 9):
            cq = int(np.count_nonzero(vals[:n] != vals[q : n + q]))
            assert cq <= q * c1 + q


def test_exactly_periodic_fixed_points():
    f = periodic([0, 1, 0, 1, 1])
    fit = periodic_fit(f, 5, 1 << 12)
    assert fit.profile.counts[-1] == 0
    res = shift_invariance(f, 5, CPS16)
    assert all(c == 0 for c in res.profile.counts)


def test_multiplicative_independence():
    assert multiplicatively_independent(2, 3)
    assert not multiplicatively_independent(2, 4)
    assert not multiplicatively_independent(4, 8)
    assert not multiplicatively_independent(9, 27)
    assert multiplicatively_independent(6, 12)


def test_report_two_three():
    # tau=0.25 is the scale-appropriate clustering threshold (see repo notes)
    report = cobham_report(
        two_three(),
        2,
        3,
        depth_k=3,
        depth_l=2,
        cps=Checkpoints.geometric(1 << 10, 1 << 18),
        tau=0.25,
        max_shift=2,
        max_period=16,
    )
    assert report.quotient_k.class_count == 2
    assert report.quotient_l.class_count == 2
    assert report.narrative["quotients_stable"] is True
    assert 1 in report.narrative["equal_shifts"]
    assert report.narrative["all_fits_distinct"] is True
    assert any("consistent at scale" in s for s in report.narrative["summary"])
    assert any("no periodic approximant" in s for s in report.narrative["summary"])
    text = report.to_text()
    assert "kernel quotients" in text and "periodic fits" in text
    obj = json.loads(report.to_json())
    assert obj["bases"] == [2, 3]
    assert obj["narrative"]["multiplicatively_independent"] is True


def test_report_periodic_sequence():
    report = cobham_report(
        periodic([0, 1, 1]),
        2,
        3,
        depth_k=2,
        depth_l=2,
        cps=Checkpoints.geometric(1 << 8, 1 << 14),
        tau=1e-2,
        max_shift=3,
        max_period=6,
    )
    exact = [p for p in report.fits if p.period == 3][0]
    assert exact.profile.counts[-1] == 0
    assert exact.verdict is Verdict.EQUAL
    assert report.narrative["all_fits_distinct"] is False
    assert report.narrative["best_fit_period"] == 3
    assert any(s.m == 3 and s.verdict is Verdict.EQUAL for s in report.shifts)


def test_report_exploratory_base_runs():
    # base-5 compression classes are reported without any structural claim
    report = cobham_report(
        two_three(),
        2,
        5,
        depth_k=2,
        depth_l=2,
        cps=Checkpoints.geometric(1 << 8, 1 << 14),
        tau=1e-2,
        max_shift=1,
        max_period=4,
    )
    assert report.quotient_l.class_count >= 1
    assert isinstance(report.narrative["summary"], list)


def test_fits_csv_shape():
    fits = periodic_fit_sweep(periodic([0, 1]), 3, 1 << 10)
    text = fits_to_csv(fits)
    lines = text.strip().split("\n")
    assert lines[0].startswith("q,fraction_at_")
    assert lines[0].endswith(",min_margin")
    assert len(lines) == 4
