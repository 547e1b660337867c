"""Rendering of report figures to image files.

Figures accompany the delimited outputs of the sweep and simulation
commands; they are rendered headlessly (Agg) next to the data file.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .simulate import RiskTable


def render_sweep_figure(rows, parameter_name: str, family: str, path) -> None:
    """Criterion ratio against the family parameter, with the boundary at 1."""
    xs = [r[0] for r in rows]
    ys = [r[1] for r in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(xs, ys, lw=1.5)
    ax.axhline(1.0, color="red", lw=1.0, ls="--", label="boundary (ratio = 1)")
    ax.set_xlabel(parameter_name)
    ax.set_ylabel("efficiency ratio")
    ax.set_title(f"{family}: order-4 loss preferred below the line")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_risk_figure(table: RiskTable, path) -> None:
    """Proportion of decisions favoring the order-4 loss against sample size."""
    series: dict[str, list[tuple[int, float]]] = {}
    for c in table.cells:
        series.setdefault(c.noise.label(), []).append(
            (c.n, c.l4_count / c.replications))
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, pts in series.items():
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=label)
    ax.set_xscale("log")
    ax.set_xlabel("sample size n")
    ax.set_ylabel("proportion favoring order-4 loss")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(f"decision-rule study (mode={table.mode}, seed={table.seed})")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
