"""figure-gen command line entry point."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FigureSpec, render, render_all


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figure-gen",
        description="Render an experiment summary CSV into per-metric line plots",
    )
    parser.add_argument("--summary", required=True, help="summary CSV path")
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--metric", help="metric column to plot (e.g. clustering_error)")
    group.add_argument(
        "--all-metrics",
        action="store_true",
        help="emit one image per metric column; --out names a directory",
    )
    parser.add_argument("--out", required=True, help="output image path (or directory)")
    parser.add_argument(
        "--methods",
        default=None,
        help="comma-separated method filter (default: every method in the file)",
    )
    parser.add_argument("--xlabel", default=None)
    parser.add_argument("--ylabel", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    methods = [m.strip() for m in args.methods.split(",")] if args.methods else None
    try:
        if args.all_metrics:
            written = render_all(args.summary, args.out, methods=methods)
        else:
            spec = FigureSpec(
                summary_path=Path(args.summary),
                metric=args.metric,
                out_path=Path(args.out),
                methods=methods,
                xlabel=args.xlabel,
                ylabel=args.ylabel,
            )
            written = [render(spec)]
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
