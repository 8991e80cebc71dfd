"""Exception types raised by the package."""


class JanssenError(Exception):
    """Base class for package errors."""


class DomainError(JanssenError, ValueError):
    """An argument lies outside the domain of the operation."""


class PrecisionExhausted(JanssenError):
    """Precision doubling reached the configured ceiling without meeting the target width."""


class OrderTooLarge(DomainError):
    """A bound was requested for an order above its validity range."""


class OrderTooSmall(DomainError):
    """A bound was requested for an order below its validity range."""


class HypothesisViolated(JanssenError):
    """A tail bound was requested outside the region where its hypothesis holds."""


class SubdivisionLimitExceeded(JanssenError):
    """Adaptive bisection hit its depth limit before certifying every piece."""
