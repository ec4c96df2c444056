"""Exception types raised across the package.

Everything derives from :class:`MultinomTestError` so callers can catch the
package's failures with a single except clause; the concrete classes also
subclass :class:`ValueError` because they all signal bad inputs or data that
cannot support the requested computation.
"""

from __future__ import annotations


class MultinomTestError(Exception):
    """Base class for all errors raised by this package."""


class LengthMismatchError(MultinomTestError, ValueError):
    """Two vectors that must share a category space have different lengths."""


class NegativeCountError(MultinomTestError, ValueError):
    """A cell count is negative."""


class EmptyGroupError(MultinomTestError, ValueError):
    """A group's counts sum to zero, so no sample exists."""


class DomainError(MultinomTestError, ValueError):
    """A numeric argument lies outside its mathematical domain."""


class DegenerateVarianceError(MultinomTestError, ValueError):
    """The variance estimate is exactly zero.

    Happens when the data are too sparse for the normal approximation:
    every cell count is 0 or 1 and the two supports are disjoint.
    """


class InsufficientSupportError(MultinomTestError, ValueError):
    """Fewer than two categories carry any observations."""


class DegeneratePermutationError(MultinomTestError, ValueError):
    """The permutation distribution is a point mass; standardization fails."""


class UnsupportedQueryError(MultinomTestError, ValueError):
    """A moment query shape outside the supported closed forms."""


class TooLargeError(MultinomTestError, ValueError):
    """An exhaustive enumeration would exceed the configured cap."""


class ConfigError(MultinomTestError, ValueError):
    """An experiment configuration is internally inconsistent."""


class InsufficientDocumentsError(MultinomTestError, ValueError):
    """A document group is too small for the requested sample size."""
