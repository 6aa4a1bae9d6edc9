"""Exception types shared across the package."""


class CoresetError(Exception):
    """Base class for numerical and structural failures in constructions."""


class DegenerateVariance(CoresetError):
    """All points coincide (weighted variance is zero up to tolerance)."""


class UnitBallViolation(CoresetError):
    """A point handed to the simplex solver lies outside the unit ball."""


class ConvergenceFailure(CoresetError):
    """An iterative kernel exhausted its sweep budget without converging."""


class SampleExceedsInput(CoresetError):
    """A requested sample is absurdly larger than the input set."""


class RankTooLow(CoresetError):
    """The input matrix has no spectral tail beyond the requested rank."""


class AllZeroPoints(CoresetError):
    """Every input point is the origin, so norm-based scores are undefined."""


class EmptyStream(CoresetError):
    """A streaming summary was finalized before any chunk was inserted."""


class ExactRankCase(CoresetError):
    """A relative spectral metric is undefined because the reference cost is zero."""


class DataError(Exception):
    """Base class for input-file problems."""


class ParseError(DataError):
    """A field failed to parse as a number.

    Carries 1-based ``line`` and ``col`` so the offending field can be
    located in the original file.
    """

    def __init__(self, message, line, col):
        super().__init__(f"{message} (line {line}, col {col})")
        self.line = line
        self.col = col


class RaggedRows(DataError):
    """Rows of the input file disagree on the number of fields."""
