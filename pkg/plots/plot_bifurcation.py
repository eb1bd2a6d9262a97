#!/usr/bin/env python3
"""Bifurcation diagrams from CLI branch records.

Plots leading boundary coefficients against the angular velocity for
every input branch.  A doubly-connected record contributes both its
outer (solid) and inner (dashed) curve; rows flagged past_fold are
drawn with a thicker stroke so the sheet beyond a saddle-node stands
out.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

import figio

THIN = 1.2
THICK = 2.6

_STYLES = {"a_1": "-", "a1_1": "-", "a2_1": "--"}


def _plot_runs(ax, x, y, thick_mask, color, linestyle, label):
    # one polyline, thickened over flagged runs; adjacent runs share an
    # endpoint so the curve stays visually continuous
    runs = []
    start = 0
    for i in range(1, len(x) + 1):
        if i == len(x) or bool(thick_mask[i]) != bool(thick_mask[start]):
            runs.append((start, i, bool(thick_mask[start])))
            start = i
    labelled = False
    for s, e, thick in runs:
        lo = max(s - 1, 0)
        ax.plot(
            x[lo:e],
            y[lo:e],
            color=color,
            linestyle=linestyle,
            linewidth=THICK if thick else THIN,
            label=None if labelled else label,
        )
        labelled = True


def draw(spec: figio.FigureSpec):
    """Build the bifurcation figure for a branch spec."""
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for i, path in enumerate(spec.inputs):
        branch = figio.read_branch(path)
        for name, values in branch.leads.items():
            _plot_runs(
                ax,
                branch.omega,
                values,
                branch.past_fold,
                color=f"C{i}",
                linestyle=_STYLES[name],
                label=f"{Path(path).stem}: {name}",
            )
    ax.set_xlabel("omega")
    ax.set_ylabel("leading coefficient")
    ax.set_title("bifurcation branches")
    ax.legend(fontsize=8)
    ax.grid(True, linewidth=0.3, alpha=0.5)
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="CSV", help="branch record files")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)
    try:
        spec = figio.FigureSpec(
            inputs=tuple(Path(p) for p in args.inputs),
            kind="bifurcation",
            out=Path(args.out),
            dpi=args.dpi,
        )
        fig = draw(spec)
    except figio.SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    fig.savefig(spec.out, dpi=spec.dpi)
    plt.close(fig)
    print(f"wrote {spec.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
