"""Exception types shared across the package."""

from __future__ import annotations


class EllTraceError(Exception):
    """Base class for every error raised by this package."""


class UndefinedInputError(EllTraceError):
    """An argument lies outside the mathematical domain of the operation."""


class ResourceBudgetError(EllTraceError):
    """A configured iteration or size budget was exhausted."""


class InvalidFieldError(EllTraceError):
    """A field description is malformed (non-squarefree m, wrong kind, ...)."""


class NotApplicableError(EllTraceError):
    """The operation is meaningless for the given field (units of the rationals, ...)."""


class StandingHypothesisError(EllTraceError):
    """Input data violates one of the standing hypotheses the formulas assume."""


class SquareDiscriminantError(EllTraceError):
    """The discriminant of the datum is a perfect square, so no character is attached."""


class UnsupportedRegimeError(EllTraceError):
    """The requested local computation falls in a regime with no supported recipe."""


class PoleError(EllTraceError):
    """Evaluation was requested exactly at a pole."""


class NonconvergentRequestError(EllTraceError):
    """A series evaluation was requested where the implementation cannot converge."""


class PrecisionUnattainableError(EllTraceError):
    """The requested value cannot be produced at the advertised precision."""


class ConfigError(EllTraceError):
    """A run or field configuration failed validation."""
