"""Exception types shared across the package."""


class RangeError(ValueError):
    """A value left the supported integer range (indices must stay below 2**63)."""


class CoverageError(RangeError):
    """A sequence was evaluated beyond the data it was built from."""


class ExprError(ValueError):
    """A sequence expression failed to parse; `offset` is the byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset
