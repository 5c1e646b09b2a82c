"""Exception hierarchy shared by every orthokit module."""

from __future__ import annotations


class OrthokitError(Exception):
    """Base class for all orthokit errors."""


class NotHermitian(OrthokitError):
    pass


class NotPSD(OrthokitError):
    pass


class NoConvergence(OrthokitError):
    pass


class DimensionMismatch(OrthokitError):
    pass


class ShapeMismatch(DimensionMismatch):
    pass


class ZeroOperator(OrthokitError):
    pass


class NotFound(OrthokitError):
    pass


class NotNormal(OrthokitError):
    pass


class NotCommuting(OrthokitError):
    pass


class EmptyFamily(OrthokitError):
    pass


class PreconditionViolated(OrthokitError):
    pass


class WitnessNotFound(OrthokitError):
    pass


class NotRank1Projection(OrthokitError):
    pass


class Refuted11Block(OrthokitError):
    """The compression of A to the range of the projection is nonzero."""

    def __init__(self, value: complex, vector=None):
        super().__init__(f"corner entry {value!r} is not zero")
        self.value = value
        self.vector = vector


class NormSplitViolated(OrthokitError):
    def __init__(self, residual: float):
        super().__init__(f"|a|^2 + |b|^2 - 1 = {residual:.3e}")
        self.residual = residual


class NoSolution(OrthokitError):
    pass


class ParamConstraintViolated(OrthokitError):
    pass


class OddDimension(OrthokitError):
    pass


class TooMany(OrthokitError):
    pass


class MatrixFormatError(OrthokitError):
    """A matrix JSON document is malformed."""
