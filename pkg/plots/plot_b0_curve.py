#!/usr/bin/env python3
"""Inner-radius threshold curve b0(alpha) from a CLI scalar curve.

Draws b0 against alpha and annotates the sample nearest alpha=0.76,
where the threshold has essentially reached 1.  The annotated value is
read from the file, never recomputed.
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
    """Build the threshold-curve figure."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for i, path in enumerate(spec.inputs):
        alpha, b0 = figio.read_curve(path)
        ax.plot(alpha, b0, color=f"C{i}", linewidth=1.6, label=Path(path).stem)
        j = int(np.argmin(np.abs(alpha - 0.76)))
        if abs(alpha[j] - 0.76) < 5e-3:
            ax.annotate(
                f"b0({alpha[j]:g}) = {b0[j]:.5f}",
                xy=(alpha[j], b0[j]),
                xytext=(0.35, 0.55),
                textcoords="axes fraction",
                fontsize=9,
                arrowprops={"arrowstyle": "->", "linewidth": 0.8},
            )
    ax.set_xlabel("alpha")
    ax.set_ylabel("b0")
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, 1.05)
    ax.set_title("inner-radius threshold")
    if len(spec.inputs) > 1:
        ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="CSV", help="alpha,b0 curve files")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)
    try:
        spec = figio.FigureSpec(
            inputs=tuple(Path(p) for p in args.inputs),
            kind="b0_curve",
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
