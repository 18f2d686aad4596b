"""Command-line figure scripts.

plot-compare --linear a.csv --exact b.csv --out fig.png
plot-sweep   --summary s.csv --out fig.png

Exit status: 0 success, 1 bad input (message names the offending file/column).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import FigureSpec, plot_sweep_scatter, plot_trajectory_compare
from .schemas import SchemaError


def main_compare(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-compare",
        description="two-panel Rfrac/Tfrac comparison of two aggregate CSVs")
    parser.add_argument("--linear", type=Path, required=True,
                        help="mean-field aggregate CSV")
    parser.add_argument("--exact", type=Path, required=True,
                        help="ensemble aggregate CSV")
    parser.add_argument("--out", type=Path, required=True,
                        help="output image path")
    parser.add_argument("--title", default="")
    args = parser.parse_args(argv)
    spec = FigureSpec(kind="trajectory_compare",
                      inputs={"linear": args.linear, "exact": args.exact},
                      out=args.out, title=args.title)
    try:
        plot_trajectory_compare(spec)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main_sweep(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-sweep",
        description="scatter of s(Q1) vs. deviation from a sweep summary CSV")
    parser.add_argument("--summary", type=Path, required=True,
                        help="sweep_summary.csv")
    parser.add_argument("--out", type=Path, required=True,
                        help="output image path")
    parser.add_argument("--title", default="")
    args = parser.parse_args(argv)
    spec = FigureSpec(kind="sweep_scatter", inputs={"summary": args.summary},
                      out=args.out, title=args.title)
    try:
        plot_sweep_scatter(spec)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main_compare())
