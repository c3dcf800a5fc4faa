"""Sequences over small alphabets and the binary digit statistics behind them.

A Sequence pairs a scalar evaluator with an optional vectorized one; prefix
scans run on uint64 numpy blocks, so nothing here touches floating point (the
integer square root is a pure-integer Newton iteration even in batch form).
Sequences are immutable after construction and safe to share between threads;
evaluation is pure.
"""

from __future__ import annotations

import math

import numpy as np

from .digits import INT_LIMIT
from .errors import CoverageError, RangeError
from .smooth import SmoothTable

_U1 = np.uint64(1)


def _check_index(n: int) -> None:
    if n < 0:
        raise ValueError(f"sequence index must be nonnegative, got {n}")
    if n >= INT_LIMIT:
        raise RangeError(f"sequence index {n} exceeds the 2**63 range")


def _bit_length_u64(x: np.ndarray) -> np.ndarray:
    """Per-element bit length of a uint64 array."""
    x = x.copy()
    out = np.zeros(x.shape, dtype=np.uint64)
    for s in (32, 16, 8, 4, 2, 1):
        t = x >> np.uint64(s)
        m = t != 0
        out[m] += np.uint64(s)
        x[m] = t[m]
    out += x != 0
    return out


def _isqrt_u64(x: np.ndarray) -> np.ndarray:
    """Exact floor square root on uint64, integer Newton from above."""
    x = np.asarray(x, dtype=np.uint64)
    work = np.maximum(x, _U1)
    g = _U1 << ((_bit_length_u64(work) + _U1) >> _U1)
    while True:
        gn = (g + work // g) >> _U1
        shrink = gn < g
        if not shrink.any():
            break
        g[shrink] = gn[shrink]
    g[g * g > work] -= _U1
    big = (g + _U1) * (g + _U1) <= work
    g[big] += _U1
    g[x == 0] = 0
    return g


# ---------------------------------------------------------------------------
# digit statistics
# ---------------------------------------------------------------------------


def leading_ones(n: int) -> int:
    """Count of leading 1 digits in the binary expansion of n."""
    _check_index(n)
    length = n.bit_length()
    flipped = ~n & ((1 << length) - 1)
    return length - flipped.bit_length()


def _leading_ones_u64(x: np.ndarray) -> np.ndarray:
    length = _bit_length_u64(x)
    mask = (_U1 << length) - _U1
    return length - _bit_length_u64(~x & mask)


def max_run(n: int) -> int:
    """Length of the longest block of consecutive 1s in the binary expansion."""
    _check_index(n)
    count = 0
    while n:
        n &= n >> 1
        count += 1
    return count


def _max_run_u64(x: np.ndarray) -> np.ndarray:
    x = x.copy()
    out = np.zeros(x.shape, dtype=np.uint64)
    while True:
        alive = x != 0
        if not alive.any():
            return out
        out += alive
        x &= x >> _U1


def max_run_recursive(n: int) -> int:
    """Longest 1-run computed by the halving recursion instead of a scan.

    Dropping the last bit keeps the statistic; appending a 1 extends it
    exactly when the remaining suffix is already a solid run of that length.
    """
    _check_index(n)
    if n < 2:
        return n
    half = n >> 1
    k = max_run_recursive(half)
    if n & 1 and half & ((1 << k) - 1) == (1 << k) - 1:
        return k + 1
    return k


def max_run_recursive_table(limit: int) -> np.ndarray:
    """The same recursion evaluated bottom-up for every n < limit.

    Level by level each parent n fills its children 2n and 2n+1, so the
    returned uint8 table is the recursion itself in batch form.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    out = np.zeros(limit, dtype=np.uint8)
    if limit > 1:
        out[1] = 1
    level = 1
    while 2 * level < limit:
        parents = np.arange(level, min(2 * level, limit), dtype=np.uint64)
        parents = parents[(parents << _U1) < limit]
        k = out[parents].astype(np.uint64)
        out[parents << _U1] = out[parents]
        odd = (parents << _U1) + _U1
        keep = odd < limit
        solid = (parents & ((_U1 << k) - _U1)) == (_U1 << k) - _U1
        out[odd[keep]] = (k + solid)[keep].astype(np.uint8)
        level *= 2
    return out


def duplicate(n: int) -> int:
    """Insert one extra 1 into the earliest longest 1-block; duplicate(0) = 1."""
    _check_index(n)
    if n == 0:
        return 1
    bits = format(n, "b")
    best = max_run(n)
    pos = 0
    while True:
        run = 0
        start = pos
        while pos < len(bits) and bits[pos] == "1":
            run += 1
            pos += 1
        if run == best:
            out = int(bits[:start] + "1" * (best + 1) + bits[pos:], 2)
            if out >= INT_LIMIT:
                raise RangeError(f"duplicate({n}) exceeds the 2**63 range")
            return out
        pos += 1


# ---------------------------------------------------------------------------
# the sequence abstraction
# ---------------------------------------------------------------------------


class Sequence:
    """A total map from nonnegative integers to indices into a label alphabet."""

    __slots__ = ("name", "alphabet", "_fn", "_batch")

    def __init__(self, name: str, alphabet, fn, batch=None):
        alphabet = tuple(alphabet)
        if not 1 <= len(alphabet) <= 256:
            raise ValueError("alphabet must have between 1 and 256 symbols")
        self.name = name
        self.alphabet = alphabet
        self._fn = fn
        self._batch = batch

    def __call__(self, n: int) -> int:
        _check_index(n)
        return self._fn(n)

    def label(self, n: int) -> str:
        return self.alphabet[self(n)]

    def values(self, ns: np.ndarray) -> np.ndarray:
        """Symbol indices for an array of arguments, as uint8."""
        ns = np.asarray(ns, dtype=np.uint64)
        if ns.size == 0:
            return np.zeros(0, dtype=np.uint8)
        if int(ns.max()) >= INT_LIMIT:
            raise RangeError("sequence index exceeds the 2**63 range")
        if self._batch is not None:
            return self._batch(ns).astype(np.uint8, copy=False)
        fn = self._fn
        return np.fromiter((fn(int(x)) for x in ns), dtype=np.uint8, count=ns.size)

    def __repr__(self) -> str:
        return f"Sequence({self.name!r}, |alphabet|={len(self.alphabet)})"


class KernelElement(Sequence):
    """The kernel member n -> parent(base**depth * n + residue)."""

    __slots__ = ("base", "depth", "residue", "parent")

    def __init__(self, parent: Sequence, base: int, depth: int, residue: int):
        if base < 2:
            raise ValueError(f"base must be >= 2, got {base}")
        if depth < 0:
            raise ValueError(f"depth must be nonnegative, got {depth}")
        factor = base**depth
        if factor >= INT_LIMIT:
            raise RangeError(f"{base}**{depth} exceeds the 2**63 index range")
        if not 0 <= residue < factor:
            raise ValueError(f"residue {residue} not in [0, {base}**{depth})")
        limit = (INT_LIMIT - 1 - residue) // factor

        def fn(n, _f=factor, _r=residue, _p=parent, _lim=limit):
            if n > _lim:
                raise RangeError(f"index {n} overflows {_f}*n+{_r} past 2**63")
            return _p(_f * n + _r)

        def batch(ns, _f=factor, _r=residue, _p=parent, _lim=limit):
            if int(ns.max()) > _lim:
                raise RangeError(f"index overflows {_f}*n+{_r} past 2**63")
            return _p.values(ns * np.uint64(_f) + np.uint64(_r))

        super().__init__(
            f"compress:{base}:{depth}:{residue}:{parent.name}",
            parent.alphabet,
            fn,
            batch,
        )
        self.base = base
        self.depth = depth
        self.residue = residue
        self.parent = parent


def compress(f: Sequence, k: int, alpha: int, r: int) -> KernelElement:
    """Kernel element n -> f(k**alpha * n + r)."""
    return KernelElement(f, k, alpha, r)


def shift(f: Sequence, m: int) -> Sequence:
    """The m-fold shift n -> f(n + m)."""
    if m < 0:
        raise ValueError(f"shift must be nonnegative, got {m}")
    if m == 0:
        return f
    limit = INT_LIMIT - 1 - m

    def fn(n):
        if n > limit:
            raise RangeError(f"index {n}+{m} overflows past 2**63")
        return f(n + m)

    def batch(ns):
        if int(ns.max()) > limit:
            raise RangeError(f"index+{m} overflows past 2**63")
        return f.values(ns + np.uint64(m))

    return Sequence(f"shift:{m}:{f.name}", f.alphabet, fn, batch)


def periodic(values) -> Sequence:
    """The periodic sequence repeating `values` (symbol indices)."""
    values = tuple(int(v) for v in values)
    if not values:
        raise ValueError("periodic sequence needs at least one value")
    if min(values) < 0:
        raise ValueError("symbol indices must be nonnegative")
    size = max(values) + 1
    alphabet = tuple(str(i) for i in range(size))
    table = np.array(values, dtype=np.uint8)
    q = len(values)

    return Sequence(
        "periodic:" + ",".join(str(v) for v in values),
        alphabet,
        lambda n: values[n % q],
        lambda ns: table[(ns % np.uint64(q)).astype(np.int64)],
    )


def sequence_from_file(path) -> Sequence:
    """One symbol label per line; the line count bounds the evaluable range."""
    with open(path, "r", encoding="utf-8") as fh:
        labels = fh.read().splitlines()
    if not labels:
        raise ValueError(f"{path}: empty sequence file")
    index = {}
    for lab in labels:
        index.setdefault(lab, len(index))
    alphabet = tuple(index)
    table = np.fromiter((index[lab] for lab in labels), dtype=np.uint8, count=len(labels))
    count = len(labels)

    def fn(n):
        if n >= count:
            raise CoverageError(f"index {n} beyond file coverage [0, {count})")
        return int(table[n])

    def batch(ns):
        if int(ns.max()) >= count:
            raise CoverageError(f"index beyond file coverage [0, {count})")
        return table[ns.astype(np.int64)]

    return Sequence(f"file:{path}", alphabet, fn, batch)


# ---------------------------------------------------------------------------
# built-in example sequences
# ---------------------------------------------------------------------------


def _is_prime_small(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


# leading_ones(n) <= 63 for indices below 2**63
_PRIME_FLAGS = np.array([_is_prime_small(i) for i in range(64)], dtype=np.uint8)


def seq_leading_prime() -> Sequence:
    """1 exactly when the count of leading binary 1s is prime."""
    return Sequence(
        "leading-prime",
        ("0", "1"),
        lambda n: int(_PRIME_FLAGS[leading_ones(n)]),
        lambda ns: _PRIME_FLAGS[_leading_ones_u64(ns).astype(np.int64)],
    )


def seq_run_parity() -> Sequence:
    """Parity of the longest block of consecutive binary 1s."""
    return Sequence(
        "run-parity",
        ("0", "1"),
        lambda n: max_run(n) & 1,
        lambda ns: (_max_run_u64(ns) & _U1).astype(np.uint8),
    )


def seq_sqrt_parity() -> Sequence:
    """Parity of the integer square root."""
    return Sequence(
        "sqrt-parity",
        ("0", "1"),
        lambda n: math.isqrt(n) & 1,
        lambda ns: (_isqrt_u64(ns) & _U1).astype(np.uint8),
    )


def seq_two_three(table: SmoothTable) -> Sequence:
    """Sign sequence constant on the gaps of the 3-smooth enumeration.

    On [H_i, H_{i+1}) the value is (-1)**(alpha_i + beta_i); evaluation needs
    an explicit table and fails loudly past its coverage so experiment ranges
    stay reproducible.  Placing 0 in the leading interval [H_0, H_1) gives it
    the +1 the construction assigns to 0, so no special case is needed.
    """
    if table.limit >= INT_LIMIT:
        raise RangeError("table coverage exceeds the 2**63 index range")
    values = np.array([e.value for e in table.entries], dtype=np.uint64)
    parities = np.array([e.parity for e in table.entries], dtype=np.uint8)
    limit = table.limit
    py_values = [e.value for e in table.entries]
    py_parities = [e.parity for e in table.entries]

    def fn(n):
        if n > limit:
            raise CoverageError(f"index {n} beyond table coverage [0, {limit}]")
        lo, hi = 0, len(py_values)
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if py_values[mid] <= n:
                lo = mid
            else:
                hi = mid
        return py_parities[lo]

    def batch(ns):
        if int(ns.max()) > limit:
            raise CoverageError(f"index beyond table coverage [0, {limit}]")
        idx = np.searchsorted(values, ns, side="right").astype(np.int64) - 1
        return parities[np.maximum(idx, 0)]

    return Sequence(f"two-three[limit={limit}]", ("+1", "-1"), fn, batch)
