#!/usr/bin/env python3
"""Overlay V-state boundaries from CLI boundary dumps.

Each input file contributes one state (one or two closed curves); the
first and last inputs are highlighted, intermediates drawn in grey.
With --normalize every state is scaled by its largest radius, so
families of different size share the unit disc.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import figio


def draw(spec: figio.FigureSpec):
    """Build the overlay figure for a boundaries spec."""
    states = [figio.read_boundary(p) for p in spec.inputs]
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    last = len(states) - 1
    for i, state in enumerate(states):
        curves = figio.normalized(state.curves) if spec.normalize else state.curves
        highlight = i in (0, last)
        color = "tab:blue" if i == 0 else "tab:red" if i == last else "0.6"
        width = 1.8 if highlight else 0.9
        label = f"omega={state.omega:g}" if state.omega is not None else state.path.stem
        for j, (x, y) in enumerate(curves):
            ax.plot(
                np.append(x, x[0]),
                np.append(y, y[0]),
                color=color,
                linewidth=width,
                linestyle="-" if j == 0 else "--",
                label=label if j == 0 else None,
            )
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    title = "V-state boundaries"
    if spec.normalize:
        title += " (normalized)"
    ax.set_title(title)
    ax.legend(fontsize=8, loc="upper right")
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="CSV", help="boundary dump files")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--normalize", action="store_true",
                        help="scale each state by its largest radius")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)
    try:
        spec = figio.FigureSpec(
            inputs=tuple(Path(p) for p in args.inputs),
            kind="boundaries",
            out=Path(args.out),
            normalize=args.normalize,
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
