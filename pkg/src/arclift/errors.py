"""Exception hierarchy for the arclift package.

Every domain failure raises a subclass of ArcliftError so callers can
separate mathematical outcomes (NotStrictError, OutOfFamilyError, ...)
from programming mistakes, which surface as ordinary Python exceptions.
"""


class ArcliftError(Exception):
    """Base class for all arclift domain errors."""


class FieldMismatchError(ArcliftError):
    """Operands live over different scalar fields or series rings."""


class NotAUnitError(ArcliftError):
    """Inversion of a non-unit (positive order, or zero residue)."""


class NotDivisibleError(ArcliftError):
    """Exact series division impossible; usually a violated construction identity."""


class PrecisionExhaustedError(ArcliftError):
    """A result would carry no certified coefficients at the requested depth."""


class ParseError(ArcliftError):
    def __init__(self, message, pos=None):
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
        self.pos = pos


class UnknownVariableError(ParseError):
    """Variable token outside the declared namespace."""


class MissingVariableError(ArcliftError):
    """Evaluation or substitution map does not cover a used variable."""


class StructureError(ArcliftError):
    """Structurally invalid problem data or operation arguments."""


class ValidationError(ArcliftError):
    """A mathematical validation check failed; carries the full report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class OrderTooHighError(ArcliftError):
    """Certificate normalization requested with order defect e >= c."""


class OrderViolationError(ArcliftError):
    """A remainder term has visible order 0 where order >= 1 is required."""


class IdentityFailedError(ArcliftError):
    """An internal construction identity failed to re-verify."""


class NotStrictError(ArcliftError):
    """Arc does not agree with the jet to the required congruence depth."""

    def __init__(self, message, index=None, order=None):
        super().__init__(message)
        self.index = index
        self.order = order


class OutOfFamilyError(ArcliftError):
    """Strict arc falls outside the offset family anchored at the reference."""

    def __init__(self, message, index=None, order=None):
        super().__init__(message)
        self.index = index
        self.order = order


class NoProgressError(ArcliftError):
    """Newton iteration failed to strictly increase the residual order."""


class BudgetExceededError(ArcliftError):
    """Brute-force enumeration would exceed the configured budget."""
