"""Base-k digit words and exact word/integer conversions.

Words store their digits most significant first.  The empty word encodes 0;
canonical expansions never carry a leading zero.  All integer values are kept
below 2**63: conversions that would leave that range raise RangeError instead
of silently wrapping, because wrapped indices would corrupt density counts
downstream.
"""

from __future__ import annotations

from .errors import RangeError

INT_LIMIT = 1 << 63


class Word:
    """A finite digit string over {0, .., base-1}, most significant first."""

    __slots__ = ("base", "digits")

    def __init__(self, base: int, digits):
        if base < 2:
            raise ValueError(f"base must be >= 2, got {base}")
        digits = tuple(digits)
        for d in digits:
            if not 0 <= d < base:
                raise ValueError(f"digit {d} out of range for base {base}")
        self.base = base
        self.digits = digits

    @classmethod
    def _trusted(cls, base: int, digits: tuple) -> "Word":
        # fast path for canonical constructors; skips per-digit validation
        w = object.__new__(cls)
        w.base = base
        w.digits = digits
        return w

    def __len__(self) -> int:
        return len(self.digits)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Word)
            and self.base == other.base
            and self.digits == other.digits
        )

    def __hash__(self) -> int:
        return hash((self.base, self.digits))

    def text(self, empty: str = "ε") -> str:
        """Render digits; bases above 10 use comma-separated digit lists."""
        if not self.digits:
            return empty
        if self.base <= 10:
            return "".join(str(d) for d in self.digits)
        return ",".join(str(d) for d in self.digits)

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"Word(base={self.base}, '{self.text()}')"


def expand(n: int, k: int) -> Word:
    """Canonical base-k expansion of n; 0 expands to the empty word."""
    if k < 2:
        raise ValueError(f"base must be >= 2, got {k}")
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n >= INT_LIMIT:
        raise RangeError(f"n = {n} exceeds the 2**63 range")
    if n == 0:
        return Word._trusted(k, ())
    digits = []
    while n:
        n, d = divmod(n, k)
        digits.append(d)
    digits.reverse()
    return Word._trusted(k, tuple(digits))


def expand_padded(n: int, k: int, alpha: int) -> Word:
    """Length-alpha expansion of n mod k**alpha, padded with leading zeros."""
    if k < 2:
        raise ValueError(f"base must be >= 2, got {k}")
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if alpha < 0:
        raise ValueError(f"length must be nonnegative, got {alpha}")
    n %= k**alpha
    digits = [0] * alpha
    i = alpha - 1
    while n:
        n, digits[i] = divmod(n, k)
        i -= 1
    return Word._trusted(k, tuple(digits))


def value(u: Word) -> int:
    """The integer a word stands for; rejects results at or above 2**63."""
    v = 0
    k = u.base
    for d in u.digits:
        v = v * k + d
    if v >= INT_LIMIT:
        raise RangeError(f"word value {v} exceeds the 2**63 range")
    return v


def concat(u: Word, v: Word) -> Word:
    """Concatenation uv; both words must share a base."""
    if u.base != v.base:
        raise ValueError(f"base mismatch: {u.base} vs {v.base}")
    return Word._trusted(u.base, u.digits + v.digits)
