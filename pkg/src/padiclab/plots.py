"""Matplotlib report figures rendered next to the delimited output.

matplotlib is imported lazily so headless CSV-only runs never pay for it; the
hermetic SVG path in :mod:`padiclab.output` stays dependency-free.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence


def render_series(
    xs: Sequence[float],
    ys: Sequence[float],
    path: str | Path,
    *,
    title: str = "",
    xlabel: str = "r",
    ylabel: str = "value",
    overlay: tuple[Sequence[float], str] | None = None,
) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(xs, ys, lw=0.9, color="#1f77b4", label="series")
    if overlay is not None:
        ov, label = overlay
        ax.plot(xs, ov, lw=1.2, color="#d62728", label=label)
        ax.legend(loc="best", fontsize=9)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
