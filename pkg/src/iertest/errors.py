"""Exception types shared across the library.

Everything raised on purpose derives from IerTestError so callers can
catch library failures without swallowing programming errors.
"""

from __future__ import annotations


class IerTestError(Exception):
    """Base class for all library errors."""


class DimensionError(IerTestError):
    """Inputs have incompatible or invalid shapes (non-square, mismatched n or m)."""


class AsymmetryError(IerTestError):
    """A matrix that must be symmetric differs from its transpose beyond tolerance."""


class RangeError(IerTestError):
    """An entry lies outside its admissible range beyond tolerance."""


class NonzeroDiagonalWarning(UserWarning):
    """Non-fatal: a diagonal entry exceeded tolerance before being zeroed."""


class SampleSizeError(IerTestError):
    """The population size m is too small for the requested statistic."""


class DegenerateDenominatorError(IerTestError):
    """A ratio had a vanishing denominator with a non-vanishing numerator.

    The 0/0 = 0 convention only covers the case where both sides vanish;
    anything else indicates corrupted inputs or an internal bug.
    """


class ConvergenceError(IerTestError):
    """A dense eigensolver failed outright."""


class NoConvergence(IerTestError):
    """Iterative spectral estimate did not reach tolerance within max_iter.

    Non-fatal by design: carries the best estimate so a Monte Carlo sweep
    can log the failure and continue.
    """

    def __init__(self, best_estimate: float, iterations: int):
        self.best_estimate = float(best_estimate)
        self.iterations = int(iterations)
        super().__init__(
            f"no convergence after {iterations} iterations "
            f"(best estimate {best_estimate!r})"
        )


class DomainError(IerTestError):
    """A parameter violates the mathematical preconditions of a formula."""


class TooLargeToEnumerate(IerTestError):
    """A brute-force enumeration would exceed the configured size cap."""


class DivergentChiSquare(IerTestError):
    """The chi-square sum has a term with zero null mass but positive
    alternative mass, so the quantity is +infinity."""


class ConfigError(IerTestError):
    """A sweep or power-curve configuration document is malformed."""


class MatrixFormatError(IerTestError):
    """A matrix or population file could not be parsed; message names the cell."""
