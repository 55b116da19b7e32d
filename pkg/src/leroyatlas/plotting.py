"""Matplotlib figures written next to the CSV/JSON output.

matplotlib is imported lazily and always with the non-interactive Agg
backend, so the library never opens a window.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

from leroyatlas.disk import Samples, VerificationReport

__all__ = ["disk_figure", "sweep_figure"]

_STATUS_COLORS = {
    "both": "#1b9e77",
    "verified only": "#7570b3",
    "neither": "#bdbdbd",
    "DISAGREE": "#d95f02",
}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def disk_figure(samples: Samples, report: VerificationReport, path: str | Path) -> Path:
    """Polar scatter of the property metric with the witness marked."""
    plt = _pyplot()
    path = Path(path)
    fig = plt.figure(figsize=(6.4, 5.6))
    ax = fig.add_subplot(projection="polar")
    values = np.where(np.isfinite(samples.values), samples.values, np.nan)
    sc = ax.scatter(samples.angle, samples.radius, c=values, s=4, cmap="viridis", linewidths=0)
    fig.colorbar(sc, ax=ax, pad=0.1, label=report.property)
    if report.witness is not None:
        ax.plot([np.angle(report.witness)], [abs(report.witness)], marker="x", color="red", ms=10, mew=2)
    ax.set_rmax(samples.grid.r_max)
    status = "pass" if report.passed else "FAIL"
    ax.set_title(f"{report.property}: {status}, extremal {report.extremal_value:.6g}", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def sweep_figure(labels: Sequence[str], theorem_ids: Sequence[str],
                 status: Sequence[Sequence[str]], path: str | Path) -> Path:
    """Status matrix, one row per theorem and one column per sweep point."""
    plt = _pyplot()
    from matplotlib.colors import ListedColormap
    from matplotlib.patches import Patch

    path = Path(path)
    keys = list(_STATUS_COLORS)
    grid = np.array([[keys.index(s) for s in row] for row in status], dtype=float)
    fig, ax = plt.subplots(figsize=(max(4.0, 0.45 * len(labels) + 2.5), 0.4 * len(theorem_ids) + 1.8))
    ax.imshow(grid, cmap=ListedColormap(list(_STATUS_COLORS.values())), vmin=0, vmax=len(keys) - 1, aspect="auto")
    ax.set_xticks(range(len(labels)), labels, rotation=60, ha="right", fontsize=7)
    ax.set_yticks(range(len(theorem_ids)), theorem_ids, fontsize=8)
    ax.legend(handles=[Patch(color=c, label=k) for k, c in _STATUS_COLORS.items()],
              loc="upper left", bbox_to_anchor=(1.01, 1.0), fontsize=7, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
