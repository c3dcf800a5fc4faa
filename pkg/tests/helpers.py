"""Independent oracles the tests check the library against.

Everything here is deliberately naive: string scans, double loops over
exponents, set-based marking.  None of it shares code with the package.
"""

from fractions import Fraction


def leading_ones_by_string(n: int) -> int:
    bits = format(n, "b") if n else ""
    cut = bits.find("0")
    return len(bits) if cut == -1 else cut


def max_run_by_string(n: int) -> int:
    bits = format(n, "b") if n else ""
    return max((len(run) for run in bits.split("0")), default=0)


def smooth_by_double_loop(limit: int) -> list:
    """All (value, alpha, beta) with 2**a 3**b <= limit, sorted by value."""
    out = []
    a = 0
    while 2**a <= limit:
        b = 0
        while 2**a * 3**b <= limit:
            out.append((2**a * 3**b, a, b))
            b += 1
        a += 1
    out.sort()
    return out


def kronecker_pairs_by_fractions(t: Fraction, cap: int) -> tuple:
    """Qualifying exponent pairs on both sides, via Fraction comparisons."""
    hi = 1 + t
    two_side = []
    three_side = []
    for g in range(cap + 1):
        for d in range(cap + 1):
            r = Fraction(2**g, 3**d)
            if 1 < r < hi:
                two_side.append((g, d))
            if 1 < 1 / r < hi:
                three_side.append((g, d))
    return two_side, three_side


def union_by_marking_sets(k, m, delta, gamma, nu) -> int:
    """|[0, k**nu) covered by union over a < gamma of (m k^a N0 + [k^d, k^(a-d)))|."""
    total = k**nu
    covered = set()
    for a in range(gamma):
        lo, hi = k**delta, k ** (a - delta) if a >= delta else 0
        if lo >= hi:
            continue
        start = 0
        while start + lo < total:
            covered.update(range(start + lo, min(start + hi, total)))
            start += m * k**a
    return len(covered)


def tribonacci_no_triple_ones(length: int) -> int:
    """Binary strings of the given length with no block of three 1s."""
    a, b, c = 1, 2, 4  # lengths 0, 1, 2
    if length == 0:
        return a
    if length == 1:
        return b
    for _ in range(length - 2):
        a, b, c = b, c, a + b + c
    return c
