"""
Exception hierarchy shared by every package of the toolkit.
"""
from typing import Optional


class OacError(Exception):
    """Base class for all toolkit errors."""


class InvalidConfigError(OacError, ValueError):
    """Problem instance violates its invariants (q, n, K, SNR, power)."""


class SymbolRangeError(OacError, ValueError):
    """Input symbol outside the encoder alphabet."""


class DomainError(OacError, ValueError):
    """Argument outside the domain of a mathematical function."""


class DimensionMismatchError(OacError, ValueError):
    """Vector lengths disagree."""


class UnsupportedNoiseError(OacError):
    """Operation is only defined for another noise model."""


class SolverError(OacError):
    """Base class for optimizer failures."""


class RootBracketError(SolverError):
    """Bisection target does not change sign on its bracket."""


class MonotonicityError(SolverError):
    """Target expected to be strictly increasing is not."""


class ThresholdNotApplicableError(SolverError):
    """No SNR threshold exists for this pair of grid sizes."""


class ChainPropagationError(SolverError):
    """A link of the N-dimensional stationarity chain could not be solved."""

    def __init__(self, message: str, link: Optional[int] = None):
        super().__init__(message if link is None else f"link {link}: {message}")
        self.link = link


class SpacingOrderError(SolverError):
    """N-dimensional spacings are not non-decreasing."""
