"""Figure rendering for trajectory comparisons and sweep summaries."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schemas import SchemaError, read_aggregate, read_summary

FIGURE_KINDS = ("trajectory_compare", "sweep_scatter")

# fixed geometry so identical inputs give identical figure content
_FIGSIZE = (9.0, 4.0)
_DPI = 150

_OUTCOME_COLORS = {"DiesOut": "tab:blue", "Persists": "tab:red"}


@dataclass
class FigureSpec:
    kind: str
    inputs: dict[str, Path]
    out: Path
    title: str = ""
    labels: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}")


def plot_trajectory_compare(spec: FigureSpec) -> Path:
    """Two panels (Rfrac, Tfrac), each with the mean-field and exact curves."""
    linear = read_aggregate(spec.inputs["linear"])
    exact = read_aggregate(spec.inputs["exact"])
    if len(linear["t"]) != len(exact["t"]) or \
            not np.allclose(linear["t"], exact["t"]):
        raise SchemaError("trajectories are not on the same time grid")

    fig, (ax_r, ax_t) = plt.subplots(1, 2, figsize=_FIGSIZE, dpi=_DPI)
    for ax, column, name in ((ax_r, "R_frac", "rumor fraction"),
                             (ax_t, "T_frac", "truth fraction")):
        ax.plot(linear["t"], linear[column], "-", color="tab:blue",
                label="mean-field (linear)")
        ax.plot(exact["t"], exact[column], "--", color="tab:red",
                label="exact (ensemble)")
        ax.set_xlabel(spec.labels.get("x", "t"))
        ax.set_ylabel(spec.labels.get(column, name))
        ax.legend()
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    fig.savefig(spec.out)
    plt.close(fig)
    return Path(spec.out)


def plot_sweep_scatter(spec: FigureSpec) -> Path:
    """Scatter of s(Q1) against linear-vs-exact deviation, colored by the
    linear-model outcome. Rows without a deviation (not subsampled) are
    skipped; at least one plottable row is required."""
    summary = read_summary(spec.inputs["summary"])
    have = ~np.isnan(summary["deviation"])
    if not have.any():
        raise SchemaError("no rows with a deviation value to plot")

    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    for outcome, color in _OUTCOME_COLORS.items():
        sel = have & (summary["outcome_linear"] == outcome)
        if sel.any():
            ax.scatter(summary["s_q1"][sel], summary["deviation"][sel],
                       color=color, label=outcome, s=30)
    ax.axvline(0.0, color="gray", linewidth=0.8, linestyle=":")
    ax.set_xlabel(spec.labels.get("x", "s(Q1)"))
    ax.set_ylabel(spec.labels.get("y", "sup deviation of rumor fraction"))
    ax.legend()
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    fig.savefig(spec.out)
    plt.close(fig)
    return Path(spec.out)
