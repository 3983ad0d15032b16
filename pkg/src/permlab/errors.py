"""Exception hierarchy.  Everything raised on purpose derives from PermlabError."""


class PermlabError(Exception):
    pass


class DimensionMismatch(PermlabError, ValueError):
    pass


class FieldMismatch(PermlabError, ValueError):
    pass


class DivisionByZero(PermlabError, ZeroDivisionError):
    pass


class UnsupportedField(PermlabError, ValueError):
    pass


class SearchBoundExceeded(PermlabError):
    pass


class PreconditionFailed(PermlabError, ValueError):
    """An operation was called on data that lacks a required property."""


class InvalidDatum(PreconditionFailed):
    pass


class InvalidCocycle(PreconditionFailed):
    pass


class InvalidDeformationMap(PreconditionFailed):
    pass


class InvalidBialgebra(PreconditionFailed):
    pass


class ParseError(PermlabError, ValueError):
    pass


class NotCommutativeAssociative(PreconditionFailed):
    pass


class NotDifferential(PreconditionFailed):
    pass


class NotSubalgebra(PreconditionFailed):
    pass


class BadProjection(PreconditionFailed):
    pass


class RhoNotInvertible(PreconditionFailed):
    pass


class ZeroScalingWitness(PreconditionFailed):
    pass


class NotSection(PreconditionFailed):
    pass


class NotCompatiblePair(PreconditionFailed):
    pass


class NonAbelianKernel(PreconditionFailed):
    pass


class InvalidAutomorphism(PreconditionFailed):
    pass


class NotSymmetric(PreconditionFailed):
    pass


class Singular(PreconditionFailed):
    pass
