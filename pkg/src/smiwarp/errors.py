"""Exception types shared across the package.

The CLI maps :class:`DataError` to exit code 2 and :class:`NumericalError`
to exit code 3.
"""


class DataError(ValueError):
    """Input data is malformed or incompatible with the requested operation."""


class InvalidPathError(DataError):
    """An alignment path violates the boundary/continuity/monotonicity rules."""

    def __init__(self, verdict):
        super().__init__(str(verdict))
        self.verdict = verdict


class DimensionMismatchError(DataError):
    pass


class DegenerateBandwidthError(DataError):
    """Median pairwise distance is zero, so no kernel width can be derived."""


class NumericalError(ArithmeticError):
    """A linear-algebra step failed even after regularization fallbacks."""
