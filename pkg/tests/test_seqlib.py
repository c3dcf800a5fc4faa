import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from asymauto import (
    CoverageError,
    RangeError,
    compress,
    duplicate,
    enumerate_smooth,
    leading_ones,
    max_run,
    max_run_recursive,
    max_run_recursive_table,
    periodic,
    seq_leading_prime,
    seq_run_parity,
    seq_sqrt_parity,
    seq_two_three,
    sequence_from_file,
    shift,
)
from asymauto.seqlib import _isqrt_u64, _leading_ones_u64, _max_run_u64

from helpers import leading_ones_by_string, max_run_by_string


def test_leading_ones_examples():
    assert leading_ones(0) == 0
    assert leading_ones(123) == 4
    for m in range(1, 21):
        assert leading_ones(2**m - 1) == m


def test_max_run_examples():
    assert max_run(0) == 0
    assert max_run(1234) == 2
    for m in range(1, 21):
        assert max_run(2**m - 1) == m


def test_string_scan_oracles():
    n = 1 << 16
    lam = _leading_ones_u64(np.arange(n, dtype=np.uint64))
    kap = _max_run_u64(np.arange(n, dtype=np.uint64))
    for i in range(n):
        assert int(lam[i]) == leading_ones_by_string(i)
        assert int(kap[i]) == max_run_by_string(i)


def test_max_run_recursive():
    assert max_run_recursive(1234) == 2
    table = max_run_recursive_table(1 << 16)
    kap = _max_run_u64(np.arange(1 << 16, dtype=np.uint64)).astype(np.uint8)
    assert np.array_equal(table, kap)
    for i in range(1 << 12):
        assert max_run_recursive(i) == max_run(i)


@given(st.integers(0, 2**40 - 1))
def test_max_run_halving(n):
    assert max_run_recursive(2 * n) == max_run(n)
    assert max_run_recursive(n) == max_run(n)


def test_duplicate_examples():
    assert duplicate(0) == 1
    assert duplicate(5) == 13
    assert duplicate(6) == 14


def test_duplicate_properties():
    seen = set()
    for n in range(1, 1 << 12):
        d = duplicate(n)
        assert max_run(d) == max_run(n) + 1
        assert d <= 3 * n
        assert d not in seen
        seen.add(d)


def test_leading_prime_sequence():
    f = seq_leading_prime()
    assert f(123) == 0  # leading-ones count 4 is composite
    assert f(0) == 0
    assert f(7) == 1


def test_leading_prime_exceptional_set():
    f = seq_leading_prime()
    n = 1 << 16
    vals = f.values(np.arange(n, dtype=np.uint64))
    doubled = f.values(np.arange(0, 2 * n, 2, dtype=np.uint64))
    odd = f.values(np.arange(1, 2 * n + 1, 2, dtype=np.uint64))
    bad = int(np.count_nonzero((vals != doubled) | (vals != odd)))
    assert bad <= 2 * (math.log2(n) + 1)


def test_run_parity_sequence():
    f = seq_run_parity()
    assert f(1234) == 0
    assert f(0) == 0
    assert f(1) == 1


def test_run_parity_not_near_constant():
    f = seq_run_parity()
    n = 1 << 18
    ones = int(np.count_nonzero(f.values(np.arange(n, dtype=np.uint64))))
    assert ones >= n // 6
    assert n - ones >= n // 6


def test_sqrt_parity_sequence():
    f = seq_sqrt_parity()
    assert f(0) == 0
    assert f(3) == 1
    assert f(4) == 0


def test_isqrt_batch_exact():
    ns = np.arange(1 << 17, dtype=np.uint64)
    got = _isqrt_u64(ns)
    for i in (0, 1, 2, 3, 4, 99, 100, 101, (1 << 17) - 1):
        assert int(got[i]) == math.isqrt(i)
    assert np.array_equal(got * got <= ns, np.ones(len(ns), dtype=bool))
    rng = np.random.default_rng(11)
    big = rng.integers(0, (1 << 63) - 1, size=4096, dtype=np.int64).astype(np.uint64)
    for n, s in zip(big.tolist(), _isqrt_u64(big).tolist()):
        assert s == math.isqrt(n)


def test_two_three_values_and_coverage():
    table = enumerate_smooth(1 << 22)
    f = seq_two_three(table)
    expected = ["+1", "+1", "-1", "-1", "+1", "+1", "+1", "+1", "-1", "+1", "+1", "+1"]
    assert [f.label(n) for n in range(12)] == expected
    assert f(0) == 0  # +1
    assert f(8) == 1  # -1
    f(table.limit)  # inside coverage
    with pytest.raises(CoverageError):
        f(table.limit + 1)
    with pytest.raises(CoverageError):
        f.values(np.array([table.limit + 1], dtype=np.uint64))


def test_shift_behavior():
    f = seq_sqrt_parity()
    assert shift(f, 0) is f
    for n in range(10**4):
        assert shift(shift(f, 1), 1)(n) == f(n + 2)
    assert shift(f, 1)(3) == 0
    with pytest.raises(RangeError):
        shift(f, 1 << 62)(1 << 62)


def test_compress_behavior():
    f = seq_run_parity()
    ident = compress(f, 2, 0, 0)
    halves = compress(f, 2, 1, 0)
    for n in range(2048):
        assert ident(n) == f(n)
        assert halves(n) == f(2 * n) == max_run(n) % 2
    with pytest.raises(ValueError):
        compress(f, 2, 1, 2)
    with pytest.raises(RangeError):
        compress(f, 2, 40, 0)(1 << 40)


def test_periodic_sequence():
    p = periodic([0, 1, 1])
    assert p(5) == 1
    assert periodic([7])(12345) == 7
    q = shift(p, 3)
    for n in range(10**4):
        assert q(n) == p(n)
    with pytest.raises(ValueError):
        periodic([])


def test_sequence_from_file(tmp_path):
    path = tmp_path / "seq.txt"
    path.write_text("+1\n-1\n-1\n+1\n", encoding="utf-8")
    f = sequence_from_file(path)
    assert f.alphabet == ("+1", "-1")
    assert [f(n) for n in range(4)] == [0, 1, 1, 0]
    assert f.values(np.arange(4)).tolist() == [0, 1, 1, 0]
    with pytest.raises(CoverageError):
        f(4)
    with pytest.raises(ValueError):
        (tmp_path / "empty.txt").write_text("", encoding="utf-8")
        sequence_from_file(tmp_path / "empty.txt")


def test_batch_matches_scalar_on_builtins():
    table = enumerate_smooth(1 << 22)
    rng = np.random.default_rng(5)
    ns = np.unique(rng.integers(0, 1 << 18, size=2048))
    for f in (
        seq_leading_prime(),
        seq_run_parity(),
        seq_sqrt_parity(),
        seq_two_three(table),
        periodic([0, 1, 1, 0]),
        shift(seq_run_parity(), 3),
        compress(seq_leading_prime(), 2, 2, 1),
    ):
        batch = f.values(ns)
        for n, v in zip(ns.tolist(), batch.tolist()):
            assert f(n) == v, (f.name, n)


@given(st.integers(1, 6), st.integers(1, 10))
def test_leading_ones_plateau(pi, alpha):
    base = ((1 << pi) - 1) << alpha
    for m in range(1 << (alpha - 1)):
        assert leading_ones(base + m) == pi
