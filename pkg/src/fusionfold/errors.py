"""Exception hierarchy shared by all modules.

Errors that signal a failed verification carry a ``witness`` dict so the CLI
can emit it as JSON and exit with status 1.
"""
from __future__ import annotations

from typing import Any


class FusionFoldError(Exception):
    """Base class for every error raised by the package."""

    def __init__(self, message: str = "", witness: dict[str, Any] | None = None):
        super().__init__(message)
        self.witness = witness or {}


class VerificationError(FusionFoldError):
    """A finite check of a structural claim failed."""


# exact
class InvalidOrder(FusionFoldError, ValueError):
    pass


class InvalidIndex(FusionFoldError, IndexError):
    pass


class FieldMismatch(FusionFoldError, TypeError):
    pass


class DivByZero(FusionFoldError, ZeroDivisionError):
    pass


# fusion
class RingMismatch(FusionFoldError, TypeError):
    pass


class NotAnObjectClass(FusionFoldError, ValueError):
    pass


# species
class UnknownCatalogEntry(FusionFoldError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class InconsistentSpecies(VerificationError):
    pass


# coxeter
class NotFiniteType(FusionFoldError):
    pass


class GroupTooLarge(FusionFoldError):
    pass


class RankTooLarge(FusionFoldError):
    pass


class FiberNotOrthogonal(VerificationError):
    pass


class FoldingNotCompatible(VerificationError):
    pass


class DecompositionFailed(VerificationError):
    pass


class IdentificationFailed(VerificationError):
    pass


# cluster
class InvalidQuiver(FusionFoldError):
    pass


class OrbitNotDiscrete(VerificationError):
    pass


class SearchCapExceeded(FusionFoldError):
    pass


# stability
class TwistReflectionMismatch(VerificationError):
    pass


class FiberNotDiscrete(VerificationError):
    pass


class DegenerateCharge(FusionFoldError):
    pass


class DeformationFailure(VerificationError):
    pass
