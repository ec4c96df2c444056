"""Exact multinomial moments and tiny-instance exhaustive enumeration.

The closed-form moments (up to total degree 4, at most two distinct cells)
and the enumerator let the test statistics be verified without trusting
Monte Carlo.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Mapping

import numpy as np

from .core import ProbabilityVector
from .errors import LengthMismatchError, TooLargeError, UnsupportedQueryError

__all__ = [
    "MomentQuery",
    "falling_factorial",
    "multinomial_moment",
    "enumerate_multinomial",
    "exact_expected_D",
]

ENUMERATION_CAP = 10**6


@dataclass(frozen=True)
class MomentQuery:
    """A product-of-powers moment E[prod N_i^a_i].

    Supported shapes: one cell with exponent 1..4, or two distinct cells
    with exponents (1,1), (2,1), or (2,2).
    """

    powers: Mapping[int, int]

    def __post_init__(self) -> None:
        powers = dict(self.powers)
        if not powers:
            raise UnsupportedQueryError("empty moment query")
        if any(a <= 0 for a in powers.values()):
            raise UnsupportedQueryError("exponents must be positive")
        if len(powers) > 2:
            raise UnsupportedQueryError("at most two distinct cells supported")
        if sum(powers.values()) > 4:
            raise UnsupportedQueryError("total degree must be at most 4")
        object.__setattr__(self, "powers", powers)

    def shape(self) -> tuple[int, ...]:
        return tuple(sorted(self.powers.values(), reverse=True))


def falling_factorial(n: int, a: int) -> int:
    """n (n-1) ... (n-a+1); equals 1 at a=0 and 0 once a factor hits zero."""
    if n < 0 or a < 0:
        raise ValueError("falling_factorial needs nonnegative arguments")
    return math.perm(n, a) if a <= n else 0


def multinomial_moment(p: ProbabilityVector, n: int, q: MomentQuery) -> float:
    """Exact moment of a Multinomial(n, p) vector for a supported query.

    Raises:
        UnsupportedQueryError: shape outside the seven closed forms.
        IndexError: a query index is out of range for ``p``.
    """
    for idx in q.powers:
        if not 0 <= idx < p.k:
            raise IndexError(f"cell index {idx} out of range for k={p.k}")
    nf = [falling_factorial(n, a) for a in range(5)]
    shape = q.shape()
    if len(q.powers) == 1:
        ((i, a),) = q.powers.items()
        pi = float(p.probs[i])
        if a == 1:
            return nf[1] * pi
        if a == 2:
            return nf[2] * pi**2 + n * pi
        if a == 3:
            return nf[3] * pi**3 + 3 * nf[2] * pi**2 + n * pi
        if a == 4:
            return nf[4] * pi**4 + 6 * nf[3] * pi**3 + 7 * nf[2] * pi**2 + n * pi
        raise UnsupportedQueryError(f"unsupported single-cell exponent {a}")
    (i, ai), (j, aj) = sorted(q.powers.items(), key=lambda kv: -kv[1])
    pi, pj = float(p.probs[i]), float(p.probs[j])
    if shape == (1, 1):
        return nf[2] * pi * pj
    if shape == (2, 1):
        return nf[3] * pi**2 * pj + nf[2] * pi * pj
    if shape == (2, 2):
        return (
            nf[4] * pi**2 * pj**2
            + 3 * nf[3] * (pi**2 * pj + pi * pj**2)
            + nf[2] * pi * pj
        )
    raise UnsupportedQueryError(f"unsupported two-cell shape {shape}")


def enumerate_multinomial(
    p: ProbabilityVector, n: int
) -> Iterator[tuple[tuple[int, ...], float]]:
    """All outcomes of Multinomial(n, p) with their exact probabilities.

    Yields ``(counts, probability)`` pairs; the probabilities sum to one.

    Raises:
        TooLargeError: more than 10^6 compositions would be produced.
    """
    k = p.k
    n_outcomes = math.comb(n + k - 1, k - 1)
    if n_outcomes > ENUMERATION_CAP:
        raise TooLargeError(
            f"{n_outcomes} outcomes exceed the enumeration cap {ENUMERATION_CAP}"
        )
    probs = [float(v) for v in p.probs]

    def compositions(total: int, cells: int):
        if cells == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in compositions(total - first, cells - 1):
                yield (first,) + rest

    n_fact = math.factorial(n)
    for counts in compositions(n, k):
        coeff = n_fact
        prob = 1.0
        for cnt, pi in zip(counts, probs):
            coeff //= math.factorial(cnt)
            if cnt:
                if pi == 0.0:
                    prob = 0.0
                    break
                prob *= pi**cnt
        yield counts, coeff * prob


def exact_expected_D(
    p1: ProbabilityVector, p2: ProbabilityVector, n1: int, n2: int
) -> float:
    """Exact multinomial-model expectation of the distance estimate.

    E(D) = ||p1 - p2||^2 - ||p1||^2 / n1 - ||p2||^2 / n2; the two
    correction terms are the finite-sample gap from the Poisson-model
    unbiasedness.
    """
    a = np.asarray(p1.probs)
    b = np.asarray(p2.probs)
    if a.size != b.size:
        raise LengthMismatchError(
            f"probability vectors differ in length: {a.size} vs {b.size}"
        )
    return (
        float(np.sum((a - b) ** 2))
        - float(np.dot(a, a)) / n1
        - float(np.dot(b, b)) / n2
    )
