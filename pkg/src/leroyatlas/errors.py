"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class LeRoyError(Exception):
    """Base class for all errors raised by :mod:`leroyatlas`."""


class DomainError(LeRoyError, ValueError):
    """Argument outside the domain of the requested function."""


class PoleError(DomainError):
    """Gamma function evaluated at a non-positive integer."""


class GammaOverflowError(LeRoyError, OverflowError):
    """Result magnitude exceeds the double precision range."""


class ConvergenceError(LeRoyError, ArithmeticError):
    """Series hit the term cap before the stopping rule fired."""


class ArityError(LeRoyError, ValueError):
    """A single-triple theorem was given a multi-index parameter set."""


class NormalizationError(LeRoyError, ValueError):
    """The un-normalized function does not satisfy F(0) = 1."""


class BranchGuardError(LeRoyError, ArithmeticError):
    """A logarithm could not be continued because the argument vanished."""
