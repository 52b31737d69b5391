"""Error types shared across the package.

Every domain error carries a short machine-readable ``name`` (the class
name) and a ``detail`` dict, which the CLI serializes verbatim.
"""
from __future__ import annotations


class DomainError(Exception):
    """Base class for violations of a mathematical precondition."""

    def __init__(self, message: str = "", **detail):
        super().__init__(message or self.__class__.__name__)
        self.detail = detail

    @property
    def name(self) -> str:
        return self.__class__.__name__

    def to_json(self) -> dict:
        return {"error": self.name, "message": str(self), "detail": self.detail}


# finite probabilities
class InvalidProbability(DomainError):
    pass


class NegativeEntry(DomainError):
    pass


class ColumnNotStochastic(DomainError):
    pass


class MeasureNotPreserved(DomainError):
    pass


class SourceTargetMismatch(DomainError):
    pass


class TargetMismatch(DomainError):
    pass


# pointed sets and mixtures
class Mismatch(DomainError):
    pass


class EmptyFamily(DomainError):
    pass


class InterfaceViolation(DomainError):
    pass


# information loss
class LabelMismatch(DomainError):
    pass


class UndefinedInvariant(DomainError):
    pass


class NonpositiveEuler(DomainError):
    pass


# cubical
class RelationViolated(DomainError):
    pass


class ExplosionGuard(DomainError):
    pass


class NotSubset(DomainError):
    pass


class InvalidCategory(DomainError):
    pass


# summing functors
class MissingTermNerve(DomainError):
    pass


# quantum
class NotHermitian(DomainError):
    pass


class NotPSD(DomainError):
    pass


class TraceNotOne(DomainError):
    pass


class NotCP(DomainError):
    pass


class NotTP(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


class AnnulusViolated(DomainError):
    pass


class NotUnitary(DomainError):
    pass


class ZeroVector(DomainError):
    pass


# gapped systems
class NoZeroGroundState(DomainError):
    pass


class GapViolated(DomainError):
    pass


class InfeasibleLocus(DomainError):
    pass


class IllFormedWord(DomainError):
    pass


# input handling
class ParseError(DomainError):
    pass
