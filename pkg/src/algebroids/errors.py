"""Exception types shared across the package."""

from __future__ import annotations


class CalculusError(Exception):
    """Base class for every error this package raises on purpose."""


class DivisionByZero(CalculusError, ZeroDivisionError):
    """Division by the zero polynomial or zero rational function."""


class ContextMismatch(CalculusError):
    """Operands were built over different base-variable contexts."""


class RankMismatch(CalculusError):
    """Operands live over bundles of different rank."""


class RoleMismatch(CalculusError):
    """Multivector/form role tags are not compatible with the operation."""


class DegreeError(CalculusError):
    """A degree precondition was violated (e.g. contracting p > q)."""


class VanishingSection(CalculusError):
    """A section required to be nowhere vanishing has zero coefficient."""


class ExprError(CalculusError):
    """Problem in a textual expression; ``pos`` is the 0-based offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class UnknownVariable(ExprError):
    """An identifier in an expression is not a declared base variable."""


class JacobiError(CalculusError):
    """Structure constants violate the Jacobi identity.

    ``witness`` is the failing (i, j, k) triple (0-based) together with the
    nonzero residual components.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ClosureError(CalculusError):
    """A candidate subalgebra basis is not closed under the bracket."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidAlgebroid(CalculusError):
    """An operation that needs a validated Lie algebroid got an invalid one."""


class NotAMorphism(CalculusError):
    """A bundle map failed the Lie algebroid morphism test."""


class NotACocycle(CalculusError):
    """A 1-cochain expected to be closed is not."""


class ConventionError(CalculusError):
    """An identity that must hold under the frozen sign conventions failed.

    This always indicates an internal inconsistency, never bad input.
    """


class ProblemFileError(CalculusError):
    """Problem-description file could not be parsed or resolved."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
