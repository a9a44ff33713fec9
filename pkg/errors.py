"""
errors.py – Exception hierarchy for the α-capacity toolkit.

Input problems derive from ValidationError so the CLI can map them to exit
code 1 in one place. Solver states that carry data (a partial result, the
offending row) keep it on the exception.
"""


class AlphaCapError(Exception):
    """Base class for every error raised by this package."""


# ─── Input Validation ─────────────────────────────────────────────────────────

class ValidationError(AlphaCapError):
    """Raised when user-supplied data violates a probability invariant."""


class NonStochasticRow(ValidationError):
    def __init__(self, index: int, total: float) -> None:
        self.index = index
        self.total = total
        super().__init__(f"Row {index} sums to {total!r}, expected 1.")


class NegativeEntry(ValidationError):
    def __init__(self, x: int, y: int, value: float | None = None) -> None:
        self.x = x
        self.y = y
        self.value = value
        super().__init__(f"Entry ({x}, {y}) is negative ({value!r}).")


class NotADistribution(ValidationError):
    """A vector or matrix is not a probability distribution."""


class AlphaOutOfRange(ValidationError):
    def __init__(self, value: float, valid: str) -> None:
        self.value = value
        self.valid = valid
        super().__init__(f"Order {value!r} is outside the valid range {valid}.")


class ZeroSupportInit(ValidationError):
    """An initial distribution has zeros; multiplicative updates never recover them."""


class DimensionMismatch(AlphaCapError):
    """Shapes of the arguments do not line up."""


class AlphabetMismatch(DimensionMismatch):
    """Two distributions live on alphabets of different sizes."""


# ─── Numerical / Iteration States ─────────────────────────────────────────────

class ZeroRow(AlphaCapError):
    def __init__(self, x: int) -> None:
        self.x = x
        super().__init__(f"Row {x} lost all of its mass during the update.")


class AllMassVanished(AlphaCapError):
    """Every unnormalized weight of an update is zero."""


class MaxIterationsExceeded(AlphaCapError):
    def __init__(self, limit: int, result=None) -> None:
        self.limit = limit
        self.result = result
        super().__init__(f"No convergence within {limit} iterations.")


class GridTooLarge(AlphaCapError):
    def __init__(self, points: int, limit: int) -> None:
        self.points = points
        self.limit = limit
        super().__init__(f"Grid has {points} points, limit is {limit}.")
