"""Render experiment summary CSVs into per-metric line plots."""

from .render import FigureSpec, available_metrics, build_figure, load_summary, render, render_all

__version__ = "0.1.0"

__all__ = [
    "FigureSpec",
    "available_metrics",
    "build_figure",
    "load_summary",
    "render",
    "render_all",
]
