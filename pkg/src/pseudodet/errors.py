"""Exception hierarchy shared by every module in the package."""

from __future__ import annotations


class PseudodetError(Exception):
    """Base class for all library errors."""


class InvalidAlgebra(PseudodetError):
    pass


class QuotientNotCyclic(PseudodetError):
    pass


class NotAUnit(PseudodetError):
    pass


class InvalidGroup(PseudodetError):
    pass


class GroupTooLarge(PseudodetError):
    pass


class NotARepresentation(PseudodetError):
    pass


class TwoNotInvertible(PseudodetError):
    pass


class NotFree(PseudodetError):
    pass


class NonIntegralExponent(PseudodetError):
    pass


class NonIntegralConstantTerm(PseudodetError):
    pass


class ParityMismatch(PseudodetError):
    pass


class RequiresCharP(PseudodetError):
    pass


class InsufficientPrecision(PseudodetError):
    pass


class NotOrdinary(PseudodetError):
    pass


class RootsNotRational(PseudodetError):
    pass


class NotStable(PseudodetError):
    pass


class NonCommuting(PseudodetError):
    pass


class NotProper(PseudodetError):
    pass


class LiftFailure(PseudodetError):
    pass


class MissingFrobeniusData(PseudodetError):
    pass


class OutOfRange(PseudodetError):
    pass


class ParseError(PseudodetError):
    pass


class ValidationError(PseudodetError):
    pass
