"""Exception hierarchy shared by every module."""


class SaffineError(Exception):
    """Base class for all errors raised by this package."""


class SingularMatrix(SaffineError):
    pass


class DimensionMismatch(SaffineError):
    pass


class OutOfDomain(SaffineError):
    pass


class InsufficientSamples(SaffineError):
    pass


class UnknownCatalogName(SaffineError):
    pass


class BadParams(SaffineError):
    pass


class UnsupportedOrder(SaffineError):
    pass


class DegenerateCurve(SaffineError):
    """The derivative frame C', ..., C^(n) is (numerically) dependent.

    ``t`` carries the offending parameter value when known.
    """

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class OrientationViolation(DegenerateCurve):
    pass


class NonMonotone(SaffineError):
    pass


class TableMismatch(SaffineError):
    pass


class NotNaturalParameter(SaffineError):
    pass


class NotUnimodular(SaffineError):
    pass


class GridMismatch(SaffineError):
    pass


class DriftExceeded(SaffineError):
    def __init__(self, message, s=None, drift=None):
        super().__init__(message)
        self.s = s
        self.drift = drift
