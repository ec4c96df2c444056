"""Count data model, pooled estimates, and standard-normal utilities.

The types here are immutable after construction (backing arrays are marked
read-only) and every function is pure, so the whole module is safe to use
from concurrent threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.special import erfc, ndtri

from .errors import (
    DomainError,
    EmptyGroupError,
    LengthMismatchError,
    NegativeCountError,
)

__all__ = [
    "CountVector",
    "TwoSampleCounts",
    "ProbabilityVector",
    "TestOutcome",
    "make_two_sample",
    "pooled_phat",
    "std_normal_sf",
    "std_normal_quantile",
]

_SQRT2 = float(np.sqrt(2.0))


def _readonly_int_array(values: Sequence[int] | np.ndarray) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1 or arr.size < 1:
        raise LengthMismatchError("counts must be a non-empty 1-D sequence")
    if not np.issubdtype(arr.dtype, np.integer):
        rounded = np.rint(arr)
        if not np.array_equal(rounded, arr):
            raise NegativeCountError("counts must be integers")
        arr = rounded
    arr = arr.astype(np.int64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CountVector:
    """Observed category counts for one group.

    Attributes:
        counts: length-k vector of nonnegative cell counts.
        n: group total; must equal ``counts.sum()``.
    """

    counts: np.ndarray
    n: int

    def __post_init__(self) -> None:
        arr = _readonly_int_array(self.counts)
        object.__setattr__(self, "counts", arr)
        if np.any(arr < 0):
            raise NegativeCountError("counts must be nonnegative")
        total = int(arr.sum())
        if total <= 0:
            raise EmptyGroupError("group total must be positive")
        if total != self.n:
            raise EmptyGroupError(
                f"declared total n={self.n} does not match sum of counts {total}"
            )

    @classmethod
    def from_counts(cls, counts: Sequence[int] | np.ndarray) -> "CountVector":
        arr = np.asarray(counts)
        return cls(counts=arr, n=int(np.sum(arr)))

    @property
    def k(self) -> int:
        return int(self.counts.size)

    def phat(self) -> np.ndarray:
        """Per-cell relative frequencies N_i / n."""
        return self.counts / self.n


@dataclass(frozen=True, eq=False)
class TwoSampleCounts:
    """An aligned pair of count vectors sharing one category index space."""

    group1: CountVector
    group2: CountVector

    def __post_init__(self) -> None:
        if self.group1.k != self.group2.k:
            raise LengthMismatchError(
                f"groups have different lengths: {self.group1.k} vs {self.group2.k}"
            )

    @property
    def k(self) -> int:
        return self.group1.k

    @property
    def n1(self) -> int:
        return self.group1.n

    @property
    def n2(self) -> int:
        return self.group2.n

    def swapped(self) -> "TwoSampleCounts":
        """The same data with group labels exchanged."""
        return TwoSampleCounts(group1=self.group2, group2=self.group1)


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    """Simulation-truth cell probabilities; entries sum to one."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.probs, dtype=np.float64).copy()
        if arr.ndim != 1 or arr.size < 1:
            raise LengthMismatchError("probs must be a non-empty 1-D sequence")
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise DomainError("probabilities must lie in [0, 1]")
        total = float(arr.sum())
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"probabilities must sum to 1, got {total!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    @property
    def k(self) -> int:
        return int(self.probs.size)


@dataclass(frozen=True)
class TestOutcome:
    """Result of one hypothesis test.

    ``reject`` always equals ``p_value < alpha``; for the one-sided
    normal-based tests that is the same event as the statistic exceeding
    the upper alpha quantile.
    """

    method: str
    statistic: float
    p_value: float
    reject: bool
    alpha: float
    diagnostics: Mapping[str, float] = field(default_factory=dict)


def make_two_sample(
    counts1: Sequence[int] | np.ndarray, counts2: Sequence[int] | np.ndarray
) -> TwoSampleCounts:
    """Validate two aligned count sequences and bundle them.

    Raises:
        LengthMismatchError: sequences differ in length (or are empty).
        NegativeCountError: any entry is negative.
        EmptyGroupError: a group sums to zero.
    """
    a = np.atleast_1d(np.asarray(counts1))
    b = np.atleast_1d(np.asarray(counts2))
    if a.size != b.size or a.size < 1:
        raise LengthMismatchError(
            f"groups have different lengths: {a.size} vs {b.size}"
        )
    return TwoSampleCounts(
        group1=CountVector.from_counts(a), group2=CountVector.from_counts(b)
    )


def pooled_phat(ts: TwoSampleCounts) -> np.ndarray:
    """Pooled cell frequencies (N_1i + N_2i) / (n_1 + n_2)."""
    return (ts.group1.counts + ts.group2.counts) / (ts.n1 + ts.n2)


def std_normal_sf(z):
    """Upper-tail probability of the standard normal, P(Z > z).

    Accepts a float or an ndarray; evaluated via the complementary error
    function in double precision.
    """
    out = 0.5 * erfc(np.asarray(z, dtype=np.float64) / _SQRT2)
    if np.isscalar(z) or np.ndim(z) == 0:
        return float(out)
    return out


def std_normal_quantile(q: float) -> float:
    """Inverse CDF of the standard normal on the open interval (0, 1).

    Raises:
        DomainError: ``q`` outside (0, 1).
    """
    if not (0.0 < q < 1.0):
        raise DomainError(f"quantile argument must be in (0, 1), got {q!r}")
    return float(ndtri(q))
