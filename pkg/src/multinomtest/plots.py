"""Figure rendering for the CLI report paths.

Every function writes a PNG next to the delimited output; the CSV stays
the machine-readable contract and figures are opt-in.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

import numpy as np  # noqa: E402

__all__ = ["save_curve_figure", "save_rates_figure", "figure_path_for"]


def figure_path_for(out_path: str | Path) -> Path:
    """PNG sibling of a delimited output file."""
    p = Path(out_path)
    return p.with_suffix(".png")


def save_curve_figure(
    deltas: np.ndarray,
    curves: Mapping[str, np.ndarray],
    path: str | Path,
    alpha: float | None = None,
    title: str | None = None,
) -> Path:
    """Plot one or more p-value curves against delta and save as PNG."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for name, values in curves.items():
        ax.plot(deltas, values, label=name)
    if alpha is not None:
        ax.axhline(alpha, color="gray", linestyle="--", linewidth=1,
                   label=f"alpha = {alpha:g}")
    ax.set_xlabel("delta")
    ax.set_ylabel("p-value")
    ax.set_ylim(-0.02, 1.02)
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def save_rates_figure(
    rows: Sequence[tuple[str, Mapping[str, float]]],
    path: str | Path,
    title: str | None = None,
) -> Path:
    """Grouped bars of per-method rejection rates, one group per row label."""
    labels = [label for label, _ in rows]
    methods: list[str] = []
    for _, rates in rows:
        for m in rates:
            if m not in methods:
                methods.append(m)
    x = np.arange(len(labels), dtype=float)
    width = 0.8 / max(len(methods), 1)
    fig, ax = plt.subplots(figsize=(max(6.4, 0.9 * len(labels)), 4.2))
    for j, m in enumerate(methods):
        heights = [rates.get(m, np.nan) for _, rates in rows]
        ax.bar(x + (j - (len(methods) - 1) / 2) * width, heights, width, label=m)
    ax.set_xticks(x)
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("rejection rate")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=9)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out
