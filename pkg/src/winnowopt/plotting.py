"""Figures for benchmark tables."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from matplotlib.figure import Figure

from .bench import BenchRow

_MARKERS = {"naive": "s", "bnl": "o", "wwo": "^", "wwo2": "v"}


def plot_comparisons(rows: Sequence[BenchRow], path: str | Path, title: str | None = None) -> Path:
    """Preference evaluations against input size, one line per algorithm."""
    fig = Figure(figsize=(5.5, 4), dpi=120)
    ax = fig.add_subplot()
    for algo in dict.fromkeys(r.algorithm for r in rows):
        pts = sorted((r.n, r.comparisons) for r in rows if r.algorithm == algo and r.n > 0)
        if pts:
            xs, ys = zip(*pts)
            ax.plot(xs, ys, marker=_MARKERS.get(algo, "."), label=algo)
    ns = [r.n for r in rows if r.n > 0]
    if ns and max(ns) > 10 * min(ns):
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel("tuples (n)")
    ax.set_ylabel("preference evaluations")
    families = sorted({r.family for r in rows})
    ax.set_title(title or ", ".join(families))
    if rows:
        ax.legend(frameon=False)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path)
    return path
