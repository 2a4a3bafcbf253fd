"""Line plots with error bars from experiment summary CSVs.

The input is the pinned summary schema of the estimation package: one row
per (parameter value, method) with `<metric>_mean` / `<metric>_sd` column
pairs plus a bare `k_accuracy` column. This tool reads only that file, so
it works on any summary produced by the harness without importing it.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

#: summary columns that are identifiers, not metrics
_ID_COLUMNS = {"experiment", "param_name", "param_value", "method", "n_ok", "n_failed"}


@dataclass
class FigureSpec:
    summary_path: Path
    metric: str
    out_path: Path
    methods: list[str] | None = None
    xlabel: str | None = None
    ylabel: str | None = None


def load_summary(path) -> list[dict]:
    path = Path(path)
    with path.open(newline="") as handle:
        rows = list(csv.DictReader(handle))
    if not rows:
        raise ValueError(f"{path} holds no summary rows")
    return rows


def available_metrics(rows) -> list[str]:
    """Plottable metric names: every *_mean pair plus populated bare columns."""
    names = []
    for column in rows[0]:
        if column.endswith("_mean"):
            names.append(column[: -len("_mean")])
        elif column not in _ID_COLUMNS and not column.endswith("_sd"):
            if any(row[column] != "" for row in rows):
                names.append(column)
    return names


def _series_columns(rows, metric: str) -> tuple[str, str | None]:
    columns = rows[0].keys()
    if f"{metric}_mean" in columns:
        sd = f"{metric}_sd" if f"{metric}_sd" in columns else None
        return f"{metric}_mean", sd
    if metric in columns and metric not in _ID_COLUMNS:
        return metric, None
    raise ValueError(
        f"unknown metric {metric!r}; available: {', '.join(available_metrics(rows))}"
    )


def _to_float(text: str) -> float:
    return float(text) if text != "" else np.nan


def build_figure(spec: FigureSpec):
    """Matplotlib figure for one metric: one line per method, mean +/- sd."""
    rows = load_summary(spec.summary_path)
    mean_col, sd_col = _series_columns(rows, spec.metric)

    methods: list[str] = []
    for row in rows:
        if row["method"] not in methods:
            methods.append(row["method"])
    if spec.methods is not None:
        missing = [m for m in spec.methods if m not in methods]
        if missing:
            raise ValueError(f"methods not present in summary: {missing}")
        methods = [m for m in methods if m in spec.methods]
    if not methods:
        raise ValueError("method filter left nothing to plot")

    param_name = rows[0]["param_name"]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for method in methods:
        sub = [row for row in rows if row["method"] == method]
        x = np.array([_to_float(row["param_value"]) for row in sub])
        y = np.array([_to_float(row[mean_col]) for row in sub])
        keep = ~np.isnan(y)
        err = None
        if sd_col is not None:
            err = np.array([_to_float(row[sd_col]) for row in sub])[keep]
        ax.errorbar(
            x[keep], y[keep], yerr=err, label=method,
            marker="o", markersize=4, capsize=3, linewidth=1.5,
        )
    ax.set_xlabel(spec.xlabel or param_name)
    ax.set_ylabel(spec.ylabel or spec.metric)
    ax.set_title(f"{rows[0]['experiment']}: {spec.metric}")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> Path:
    """Write the figure for one metric and return the image path."""
    fig = build_figure(spec)
    out = Path(spec.out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def render_all(summary_path, out_dir, methods=None) -> list[Path]:
    """One image per plottable metric column, named <metric>.png."""
    rows = load_summary(summary_path)
    out_dir = Path(out_dir)
    written = []
    for metric in available_metrics(rows):
        spec = FigureSpec(
            summary_path=Path(summary_path),
            metric=metric,
            out_path=out_dir / f"{metric}.png",
            methods=methods,
        )
        written.append(render(spec))
    return written
