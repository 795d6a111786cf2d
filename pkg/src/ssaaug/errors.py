"""Exception types raised across the package."""


class SsaaugError(Exception):
    """Base class for every error raised by this package."""


class InvalidSeries(SsaaugError, ValueError):
    pass


class TooShort(SsaaugError, ValueError):
    pass


class ZeroDenominator(SsaaugError, ArithmeticError):
    """A ratio metric was asked to divide by (numerically) zero."""


class ZeroVariance(ZeroDenominator):
    """The series is constant, so any variance normalization is undefined."""


class WindowTooLarge(SsaaugError, ValueError):
    pass


class EigenFailure(SsaaugError, ArithmeticError):
    pass


class EmptyGroup(SsaaugError, ValueError):
    pass


class IndexOutOfRange(SsaaugError, IndexError):
    pass


class ShapeMismatch(SsaaugError, ValueError):
    pass


class EmptyDataset(SsaaugError, ValueError):
    pass


class UnmappedLabel(SsaaugError, ValueError):
    pass


class MissingFoldFactor(SsaaugError, KeyError):
    pass


class IrregularDegenerateWarning(UserWarning):
    """The SSA irregular component was constant; it was passed through unrandomized."""


class DataFormatError(SsaaugError, ValueError):
    """A series or dataset file could not be parsed."""

    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)
        self.path, self.line = path, line
