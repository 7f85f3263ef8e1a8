"""Exception types shared across the package."""


class AvcsymError(Exception):
    """Base class for all errors raised by this package."""


class ShapeMismatch(AvcsymError):
    """A tensor or matrix does not have the declared shape."""


class DimensionMismatch(AvcsymError):
    """Two objects that must share dimensions do not."""


class NegativeEntry(AvcsymError):
    """A probability entry is negative."""

    def __init__(self, x: int, s: int, y: int, value: float):
        self.x, self.s, self.y, self.value = x, s, y, value
        super().__init__(f"negative entry {value!r} at (x={x}, s={s}, y={y})")


class RowSumViolation(AvcsymError):
    """A conditional distribution row does not sum to 1."""

    def __init__(self, x: int, s: int, actual_sum: float):
        self.x, self.s, self.actual_sum = x, s, actual_sum
        super().__init__(f"row (x={x}, s={s}) sums to {actual_sum!r}, expected 1")


class AlphabetTooSmall(AvcsymError):
    """An operation requires a larger alphabet (typically X >= 2)."""


class NonPositivePower(AvcsymError):
    """A power argument must be strictly positive."""


class NormalizationFailure(AvcsymError):
    """A distribution deviates from total mass 1 beyond the allowed budget."""


class IterationLimit(AvcsymError):
    """The LP solver exceeded its pivot budget."""


class NumericalBreakdown(AvcsymError):
    """The LP solver cannot certify its result numerically."""


class GridTooLarge(AvcsymError):
    """A brute-force grid would exceed the enforced size cap."""


class BadConstellation(AvcsymError):
    """Invalid PSK constellation parameters."""


class EtaOutOfRange(AvcsymError):
    """Beam splitter transmittivity must lie in [0, 1]."""


class QuadratureFailure(AvcsymError):
    """Adaptive quadrature could not reach the requested tolerance."""


class PitchTooLarge(AvcsymError):
    """Grid pitch exceeds the disk diameter."""
