"""Neighborhood (indifference) testing built on the proposed statistic.

Instead of the point null of exact equality, the null allows a
signal-to-noise ratio up to delta; the shifted p-value is then
p_delta = P(Z > T - delta), a monotone increasing function of delta.
``delta_star`` reports the smallest delta at which the data stop rejecting,
a useful effect-size summary when the plain p-value saturates at zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import TwoSampleCounts, std_normal_quantile, std_normal_sf
from .errors import DomainError
from .stats import proposed_statistic

__all__ = [
    "NeighborhoodCurve",
    "p_delta",
    "delta_star",
    "delta_grid",
    "neighborhood_curve",
]


def delta_grid(delta_max: float, step: float) -> np.ndarray:
    """The grid {0, step, 2 step, ...} up to and including delta_max."""
    if step <= 0:
        raise DomainError(f"step must be positive, got {step!r}")
    if delta_max <= 0:
        raise DomainError(f"delta_max must be positive, got {delta_max!r}")
    n_steps = int(np.floor(delta_max / step + 1e-9))
    return step * np.arange(n_steps + 1, dtype=np.float64)


@dataclass(frozen=True)
class NeighborhoodCurve:
    """Shifted p-values on a delta grid, with the indifference radius.

    ``p_values[j]`` equals the upper-tail probability of
    ``statistic - deltas[j]`` exactly, for the stored statistic.
    """

    deltas: np.ndarray
    p_values: np.ndarray
    delta_star: float
    alpha: float
    statistic: float


def p_delta(ts: TwoSampleCounts, delta: float) -> float:
    """p-value for the null that the signal-to-noise ratio is <= delta.

    Raises:
        DomainError: negative delta.
        DegenerateVarianceError: zero variance estimate.
    """
    if delta < 0:
        raise DomainError(f"delta must be nonnegative, got {delta!r}")
    t = proposed_statistic(ts).T
    return std_normal_sf(t - delta)


def delta_star(ts: TwoSampleCounts, alpha: float) -> float:
    """Smallest delta >= 0 with p_delta >= alpha: max(0, T - z_{1-alpha}).

    Closed form of the paper-style minimum over delta; exact because
    p_delta is continuous and strictly increasing in delta.
    """
    t = proposed_statistic(ts).T
    return max(0.0, t - std_normal_quantile(1.0 - alpha))


def neighborhood_curve(
    ts: TwoSampleCounts,
    delta_max: float | None = None,
    step: float = 0.01,
    alpha: float = 0.05,
) -> NeighborhoodCurve:
    """Evaluate the shifted p-value on the grid {0, step, ..., delta_max}.

    ``delta_max`` defaults to T + 4, which covers the curve up to
    saturation near one.
    """
    detail = proposed_statistic(ts)
    if delta_max is None:
        delta_max = max(detail.T + 4.0, step)
    deltas = delta_grid(delta_max, step)
    p_values = std_normal_sf(detail.T - deltas)
    deltas.setflags(write=False)
    p_values.setflags(write=False)
    return NeighborhoodCurve(
        deltas=deltas,
        p_values=p_values,
        delta_star=max(0.0, detail.T - std_normal_quantile(1.0 - alpha)),
        alpha=alpha,
        statistic=detail.T,
    )
