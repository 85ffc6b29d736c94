"""Exception types shared across modules.

Every error carries a short human message plus an optional ``witness``
payload (the triple, index or coefficient that triggered it) so reports can
print exactly what went wrong.
"""

from __future__ import annotations


class AlgebraError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class JacobiViolation(AlgebraError):
    pass


class FormDegenerate(AlgebraError):
    pass


class FormNotInvariant(AlgebraError):
    pass


class WindowOverflow(AlgebraError):
    pass


class NotTopologicallyNilpotent(AlgebraError):
    pass


class BadUnitPart(AlgebraError):
    pass


class NotComplementary(AlgebraError):
    pass


class NotClosed(AlgebraError):
    pass


class RequiresDifferenceDependence(AlgebraError):
    pass


class LegTypeMismatch(AlgebraError):
    pass


class UnderdeterminedWindow(AlgebraError):
    pass


class NotSubalgebra(AlgebraError):
    pass


class NotDirectSum(AlgebraError):
    pass


class RequiresWindow(AlgebraError):
    pass


class NoUnitLeadingTerm(AlgebraError):
    pass


class RequiresRational(AlgebraError):
    pass


class WindowTooSmall(AlgebraError):
    pass


class ClosureFailure(AlgebraError):
    pass


class LegActionUndefined(AlgebraError):
    pass


class InternalError(AlgebraError):
    """Invariant broken inside the engine (maps to CLI exit code 3)."""


class DomainUndeclared(AlgebraError):
    """A re-expansion was requested for a series without a declared mixed variable."""
