"""Exception types shared across the package."""


class PmskewError(Exception):
    """Base class for all errors raised by this package."""


class NonFiniteError(PmskewError):
    """A sample contains NaN or infinite values."""


class ZeroVarianceError(PmskewError):
    """All sample values are equal; central moments are degenerate."""


class ZeroScaleError(PmskewError):
    """A scale factor of zero was supplied."""


class SampleTooSmallError(PmskewError):
    """The sample has fewer observations than the operation requires."""


class SampleTooLargeError(PmskewError):
    """The sample exceeds the validity range of the requested procedure."""


class DegenerateDenominatorError(PmskewError):
    """The denominator 5*b2 - 6*b1 - 9 is numerically zero."""


class DegenerateCorrelationError(PmskewError):
    """A correlation is undefined because one variable is constant."""


class InvalidParamsError(PmskewError):
    """Distribution parameters are missing, malformed, or out of range."""


class InvalidLevelError(PmskewError):
    """A significance level lies outside the open interval (0, 1)."""


class InvalidConfigError(PmskewError):
    """A run configuration is inconsistent or incomplete."""


class ParseError(PmskewError):
    """Input data could not be parsed as numbers.

    Parameters
    ----------
    message : str
        Human-readable description.
    line : int or None
        1-based line number at which parsing failed, when known.
    """

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line
