"""Exception types shared across the toolkit."""


class LatticeError(Exception):
    """Base class for all lattice-bench errors."""


class RankDeficient(LatticeError):
    """The input rows are linearly dependent (or a zero Gram-Schmidt norm appeared)."""


class PrecisionLoss(LatticeError):
    """Floating-point mode could not certify the result; retry in exact mode."""


class DimensionMismatch(LatticeError):
    """Vector/matrix dimensions are inconsistent."""


class NotUnimodular(LatticeError):
    """A transform matrix does not have determinant +-1."""


class DimensionTooLarge(LatticeError):
    """Exhaustive enumeration was requested above its dimension limit."""


class ZeroVector(LatticeError):
    """A nonzero vector was required."""


class EmptyVector(LatticeError):
    """A non-empty generator vector was required."""


class DegenerateData(LatticeError):
    """Input data does not identify the model parameters (e.g. flat success rates)."""
