"""Exception hierarchy shared by all bohrkit modules."""

from __future__ import annotations


class BohrError(Exception):
    """Base class for every error raised by bohrkit."""


class DomainError(BohrError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(BohrError, ArithmeticError):
    """A root solver could not produce a certified bracket."""


class PrecisionError(BohrError, ArithmeticError):
    """The requested evaluation is too close to the unit circle for the tail bounds."""


class CertificationError(BohrError):
    """A constructed function failed its sampled membership or coefficient check."""


class UsageError(BohrError, ValueError):
    """Unknown tag, malformed range or similar caller mistake."""
