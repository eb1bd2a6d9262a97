"""Shared input handling for the figure scripts.

The scripts are read-only consumers of the solver CLI's CSV outputs:
boundary dumps (``theta,x,y`` or ``theta,x1,y1,x2,y2``), branch
records (``omega,residual,iter,a_1..`` with optional ``lambda`` /
``past_fold`` columns) and scalar curves (``alpha,b0``).  Anything
plotted or annotated comes out of the files; nothing is recomputed.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

_KINDS = ("boundaries", "bifurcation", "b0_curve")


class SchemaError(Exception):
    """An input file does not match the documented CSV layout."""


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: input files, figure kind, options, destination."""

    inputs: tuple[Path, ...]
    kind: str  # boundaries, bifurcation or b0_curve
    out: Path
    normalize: bool = False  # scale each state by its largest radius
    dpi: int = 150

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise SchemaError(f"unknown figure kind: {self.kind!r}")
        if not self.inputs:
            raise SchemaError("no input files given")
        missing = [str(p) for p in self.inputs if not Path(p).is_file()]
        if missing:
            raise SchemaError("missing input files: " + ", ".join(missing))


@dataclass(frozen=True)
class Boundary:
    """One state's boundary coordinates; two curves when doubly."""

    path: Path
    omega: float | None
    curves: tuple[tuple[np.ndarray, np.ndarray], ...]


@dataclass(frozen=True)
class BranchCurve:
    """Leading coefficients along a branch, with fold flags."""

    path: Path
    omega: np.ndarray
    leads: dict[str, np.ndarray]  # keyed a_1, or a1_1 and a2_1
    past_fold: np.ndarray  # bool per row


def _read_rows(path):
    comments, header, rows = [], None, []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line)
            continue
        if header is None:
            header = line.split(",")
            continue
        rows.append(line.split(","))
    if header is None or not rows:
        raise SchemaError(f"no data rows in {path}")
    if any(len(r) != len(header) for r in rows):
        raise SchemaError(f"ragged rows in {path}")
    try:
        data = np.array([[float(v) for v in r] for r in rows])
    except ValueError:
        raise SchemaError(f"non-numeric data in {path}") from None
    return comments, header, data


def _meta_from_comments(comments):
    # key=value tokens, e.g. "# alpha=0.5 m=10 omega=0.528 r=5"
    meta = {}
    for line in comments:
        for token in line.lstrip("#").split():
            key, sep, value = token.partition("=")
            if sep:
                meta[key] = value
    return meta


def read_boundary(path) -> Boundary:
    """Parse a boundary dump into one or two coordinate curves."""
    comments, header, data = _read_rows(path)
    cols = {name: data[:, i] for i, name in enumerate(header)}
    if header == ["theta", "x", "y"]:
        curves = ((cols["x"], cols["y"]),)
    elif header == ["theta", "x1", "y1", "x2", "y2"]:
        curves = ((cols["x1"], cols["y1"]), (cols["x2"], cols["y2"]))
    else:
        raise SchemaError(f"{path} is not a boundary dump (header {header})")
    meta = _meta_from_comments(comments)
    omega = float(meta["omega"]) if "omega" in meta else None
    return Boundary(Path(path), omega, curves)


def read_branch(path) -> BranchCurve:
    """Parse a branch record; accepts the arclength-extended layout."""
    _, header, data = _read_rows(path)
    names = list(header)
    past = np.zeros(len(data), dtype=bool)
    if names[0] == "lambda":
        if names[-1] != "past_fold":
            raise SchemaError(f"{path} has lambda but no past_fold column")
        past = data[:, -1] != 0.0
        data = data[:, 1:-1]
        names = names[1:-1]
    if names[:3] != ["omega", "residual", "iter"]:
        raise SchemaError(f"{path} is not a branch record (header {header})")
    cols = {name: data[:, i] for i, name in enumerate(names)}
    leads = {key: cols[key] for key in ("a_1", "a1_1", "a2_1") if key in cols}
    if not leads:
        raise SchemaError(f"{path} has no leading-coefficient column")
    return BranchCurve(Path(path), cols["omega"], leads, past)


def read_curve(path, xname: str = "alpha", yname: str = "b0"):
    """Parse a two-column scalar curve, returning (x, y) arrays."""
    _, header, data = _read_rows(path)
    if header != [xname, yname]:
        raise SchemaError(f"{path} is not a {xname},{yname} curve (header {header})")
    return data[:, 0], data[:, 1]


def normalized(curves):
    """Scale a state's curves jointly by its largest radius."""
    scale = max(float(np.max(np.hypot(x, y))) for x, y in curves)
    if scale <= 0.0:
        raise SchemaError("degenerate boundary with zero radius")
    return tuple((x / scale, y / scale) for x, y in curves)
