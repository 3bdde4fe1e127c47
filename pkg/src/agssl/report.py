"""Render sweep records as loss and accuracy figures.

Figures are written to files (Agg backend, no display); the delimited record
stream stays the primary output and these plots are a convenience mirror of
it. One curve per sampler: greedy points as-is, random baselines as the
trial mean with a shaded min-max band.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .experiment import RunRecord

_STYLE = {"greedy": dict(color="tab:blue", marker="o"),
          "random": dict(color="tab:orange", marker="s")}


def _series(records: list[RunRecord], sampler: str, field: str):
    rows = [r for r in records if r.sampler == sampler]
    budgets = sorted({r.budget for r in rows})
    grouped = [[getattr(r, field) for r in rows if r.budget == b]
               for b in budgets]
    mean = np.array([np.mean(g) for g in grouped])
    lo = np.array([np.min(g) for g in grouped])
    hi = np.array([np.max(g) for g in grouped])
    return np.array(budgets), mean, lo, hi


def _render_metric(records: list[RunRecord], field: str, ylabel: str,
                   out_path: Path) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    for sampler in ("greedy", "random"):
        if not any(r.sampler == sampler for r in records):
            continue
        budgets, mean, lo, hi = _series(records, sampler, field)
        style = _STYLE[sampler]
        label = sampler if sampler == "greedy" else "random (trial mean)"
        ax.plot(budgets, mean, label=label, markersize=4, **style)
        if np.any(hi > lo):
            ax.fill_between(budgets, lo, hi, alpha=0.15,
                            color=style["color"], linewidth=0)
    ax.set_xlabel("number of sampled nodes")
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_sweep_figures(records: list[RunRecord], out_dir,
                         prefix: str | None = None) -> list[Path]:
    """Write loss and accuracy curves as PNGs; returns the created paths.

    The file prefix defaults to "<dataset>_<regularizer>" taken from the
    first record.
    """
    if not records:
        raise ValueError("no records to plot")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if prefix is None:
        stem = Path(records[0].dataset).stem
        prefix = f"{stem}_{records[0].regularizer}"
    paths = []
    for field, ylabel in (("loss", "objective value f(S)"),
                          ("accuracy", "prediction accuracy")):
        p = out / f"{prefix}_{field}.png"
        _render_metric(records, field, ylabel, p)
        paths.append(p)
    return paths
