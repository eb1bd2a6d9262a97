"""File formats for branches, boundary dumps and scalar curves.

Branches are stored as a CSV of one row per converged state plus a
JSON sidecar carrying everything needed to rebuild the run: problem
parameters, grid, Newton configuration, per-point reports and the
coefficient vectors.  All floats are written with 17 significant
digits, which round-trips IEEE doubles exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import __version__
from .contour import Discretization, DoublyState, SimplyState, boundary_eval
from .errors import DomainError
from .solver import Branch, BranchPoint, NewtonConfig, SolveReport
from .spectrum import GsqgParams


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _branch_header(branch: Branch, arclength: bool) -> list[str]:
    n_modes = branch.disc.n_modes
    if branch.params.b is None:
        coeff_cols = [f"a_{k}" for k in range(1, n_modes + 1)]
    else:
        coeff_cols = [f"a1_{k}" for k in range(1, n_modes + 1)] + [
            f"a2_{k}" for k in range(1, n_modes + 1)
        ]
    cols = ["omega", "residual", "iter"] + coeff_cols
    if arclength:
        cols = ["lambda"] + cols + ["past_fold"]
    return cols


def _comment_lines(branch: Branch) -> list[str]:
    p, d, c = branch.params, branch.disc, branch.cfg
    b_part = "" if p.b is None else f" b={_fmt(p.b)}"
    return [
        f"# vstates {__version__} branch record",
        f"# alpha={_fmt(p.alpha)}{b_part} m={p.m}",
        f"# r={d.r} N={d.n_nodes} modes={d.n_modes}",
        f"# h={_fmt(c.fd_step)} tol={_fmt(c.tol)} max_iter={c.max_iter} damping={_fmt(c.damping)}",
    ]


def _point_row(point: BranchPoint, arclength: bool) -> list[str]:
    state = point.state
    if isinstance(state, SimplyState):
        coeffs = state.coeffs
    else:
        coeffs = np.concatenate([state.outer, state.inner])
    row = (
        [_fmt(point.omega), _fmt(point.report.final_residual), str(point.report.iterations)]
        + [_fmt(a) for a in coeffs]
    )
    if arclength:
        row = [_fmt(point.arclength)] + row + ["1" if point.past_fold else "0"]
    return row


def branch_payload(branch: Branch, arclength: bool = False) -> dict:
    """JSON-ready dict describing a branch, including coefficients."""
    p = branch.params
    return {
        "format": "vstates-branch",
        "version": __version__,
        "kind": "simply" if p.b is None else "doubly",
        "arclength": arclength,
        "params": {"alpha": p.alpha, "b": p.b, "m": p.m},
        "disc": {"r": branch.disc.r, "m": branch.disc.m},
        "cfg": {
            "fd_step": branch.cfg.fd_step,
            "tol": branch.cfg.tol,
            "max_iter": branch.cfg.max_iter,
            "damping": branch.cfg.damping,
        },
        "meta": branch.meta,
        "points": [
            {
                "lambda": point.arclength,
                "omega": point.omega,
                "past_fold": point.past_fold,
                "report": {
                    "converged": point.report.converged,
                    "iterations": point.report.iterations,
                    "final_residual": point.report.final_residual,
                    "classification": point.report.classification,
                },
                "coefficients": coefficient_payload(point.state),
            }
            for point in branch.points
        ],
    }


def branch_from_payload(payload: dict) -> Branch:
    """Rebuild a branch from a payload produced by branch_payload."""
    if payload.get("format") != "vstates-branch":
        raise DomainError("payload is not a branch record")
    pdata = payload["params"]
    params = GsqgParams(alpha=pdata["alpha"], m=pdata["m"], b=pdata["b"])
    disc = Discretization(r=payload["disc"]["r"], m=payload["disc"]["m"])
    cdata = payload["cfg"]
    cfg = NewtonConfig(
        fd_step=cdata["fd_step"],
        tol=cdata["tol"],
        max_iter=cdata["max_iter"],
        damping=cdata["damping"],
    )
    points = []
    for entry in payload["points"]:
        coeffs = entry["coefficients"]
        if params.b is None:
            state = SimplyState(params.alpha, params.m, entry["omega"], np.array(coeffs["a"]))
        else:
            state = DoublyState(
                params.alpha,
                params.b,
                params.m,
                entry["omega"],
                np.array(coeffs["a1"]),
                np.array(coeffs["a2"]),
            )
        rdata = entry["report"]
        points.append(
            BranchPoint(
                arclength=entry["lambda"],
                omega=entry["omega"],
                state=state,
                report=SolveReport(
                    converged=rdata["converged"],
                    iterations=rdata["iterations"],
                    final_residual=rdata["final_residual"],
                    classification=rdata["classification"],
                ),
                past_fold=entry.get("past_fold", False),
            )
        )
    return Branch(
        points=points, params=params, disc=disc, cfg=cfg, meta=payload.get("meta", {})
    )


def write_branch(path, branch: Branch, arclength: bool = False) -> Path:
    """Write a branch as CSV plus a JSON sidecar.

    Parameters
    ----------
    path : str or Path
        CSV destination; the sidecar lands next to it with the
        extension replaced by ``.json``.
    branch : Branch
    arclength : bool
        Include the cumulative arclength column and the past_fold
        flag, as produced by fold continuation.

    Returns
    -------
    Path
        The sidecar path.
    """
    path = Path(path)
    cols = _branch_header(branch, arclength)
    lines = _comment_lines(branch) + [",".join(cols)]
    for point in branch.points:
        lines.append(",".join(_point_row(point, arclength)))
    path.write_text("\n".join(lines) + "\n")

    sidecar = path.with_suffix(".json")
    sidecar.write_text(json.dumps(branch_payload(branch, arclength), indent=2) + "\n")
    return sidecar


def coefficient_payload(state):
    """Return the JSON-friendly coefficient dict for a boundary state.

    Parameters
    ----------
    state : SimplyState or DoublyState
        Converged boundary description.

    Returns
    -------
    dict
        ``{"a": [...]}`` for one boundary or ``{"a1": [...], "a2": [...]}``
        for two.
    """
    if isinstance(state, SimplyState):
        return {"a": [float(a) for a in state.coeffs]}
    return {
        "a1": [float(a) for a in state.outer],
        "a2": [float(a) for a in state.inner],
    }


def read_branch(path) -> Branch:
    """Rebuild a branch from its CSV and JSON sidecar.

    The CSV is the numeric authority for states; the sidecar supplies
    parameters, grid, configuration, reports and metadata.
    """
    path = Path(path)
    sidecar = path.with_suffix(".json")
    if not path.exists():
        raise DomainError(f"branch file not found: {path}")
    if not sidecar.exists():
        raise DomainError(f"branch sidecar not found: {sidecar}")
    payload = json.loads(sidecar.read_text())
    if payload.get("format") != "vstates-branch":
        raise DomainError(f"not a branch sidecar: {sidecar}")
    pdata = payload["params"]
    params = GsqgParams(alpha=pdata["alpha"], m=pdata["m"], b=pdata["b"])
    disc = Discretization(r=payload["disc"]["r"], m=payload["disc"]["m"])
    cdata = payload["cfg"]
    cfg = NewtonConfig(
        fd_step=cdata["fd_step"],
        tol=cdata["tol"],
        max_iter=cdata["max_iter"],
        damping=cdata["damping"],
    )
    arclength = payload.get("arclength", False)
    rows = _read_csv_rows(path)
    expected = _branch_header(
        Branch(points=[], params=params, disc=disc, cfg=cfg, meta={}), arclength
    )
    if rows[0] != expected:
        raise DomainError(
            f"branch CSV header mismatch in {path}: got {rows[0][:4]}..."
        )
    n_modes = disc.n_modes
    points = []
    for row, pdata in zip(rows[1:], payload["points"]):
        vals = row
        if arclength:
            lam = float(vals[0])
            past = vals[-1] == "1"
            vals = vals[1:-1]
        else:
            lam = float(pdata["lambda"])
            past = bool(pdata["past_fold"])
        omega = float(vals[0])
        coeffs = np.array([float(v) for v in vals[3:]])
        if params.b is None:
            state = SimplyState(params.alpha, params.m, omega, coeffs)
        else:
            state = DoublyState(
                params.alpha, params.b, params.m, omega, coeffs[:n_modes], coeffs[n_modes:]
            )
        rdata = pdata["report"]
        report = SolveReport(
            converged=rdata["converged"],
            iterations=rdata["iterations"],
            final_residual=rdata["final_residual"],
            classification=rdata["classification"],
        )
        points.append(
            BranchPoint(
                arclength=lam, omega=omega, state=state, report=report, past_fold=past
            )
        )
    if len(points) != len(payload["points"]):
        raise DomainError(f"row count differs between {path} and {sidecar}")
    return Branch(points=points, params=params, disc=disc, cfg=cfg, meta=payload["meta"])


def _read_csv_rows(path: Path) -> list[list[str]]:
    rows = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line.split(","))
    if not rows:
        raise DomainError(f"no data rows in {path}")
    return rows


def boundary_payload(state, disc: Discretization) -> dict:
    """JSON-ready boundary dump: grid coordinates plus coefficients."""
    theta = disc.grid()
    if isinstance(state, SimplyState):
        z, _ = boundary_eval(state, theta)
        columns = {"theta": theta, "x": z.real, "y": z.imag}
        comment = f"# alpha={_fmt(state.alpha)} m={state.m} omega={_fmt(state.omega)} r={disc.r}"
        payload_state = {"kind": "simply", "radius": state.radius, **coefficient_payload(state)}
        params = {"alpha": state.alpha, "b": None, "m": state.m, "omega": state.omega}
    elif isinstance(state, DoublyState):
        (z1, _), (z2, _) = boundary_eval(state, theta)
        columns = {
            "theta": theta,
            "x1": z1.real,
            "y1": z1.imag,
            "x2": z2.real,
            "y2": z2.imag,
        }
        comment = (
            f"# alpha={_fmt(state.alpha)} b={_fmt(state.b)} m={state.m} "
            f"omega={_fmt(state.omega)} r={disc.r}"
        )
        payload_state = {"kind": "doubly", **coefficient_payload(state)}
        params = {"alpha": state.alpha, "b": state.b, "m": state.m, "omega": state.omega}
    else:
        raise DomainError(f"cannot dump boundary of {type(state).__name__}")
    return {
        "format": "vstates-boundary",
        "version": __version__,
        "params": params,
        "disc": {"r": disc.r, "m": disc.m},
        "state": payload_state,
        "comment": comment,
        "columns": {name: [float(v) for v in col] for name, col in columns.items()},
    }


def write_boundary_payload(path, payload: dict) -> Path:
    """Write a boundary payload as CSV plus its JSON sidecar."""
    path = Path(path)
    columns = payload["columns"]
    names = list(columns)
    length = len(columns[names[0]])
    lines = [f"# vstates {__version__} boundary dump", payload["comment"], ",".join(names)]
    for i in range(length):
        lines.append(",".join(_fmt(columns[name][i]) for name in names))
    path.write_text("\n".join(lines) + "\n")
    sidecar = path.with_suffix(".json")
    sidecar.write_text(
        json.dumps({k: v for k, v in payload.items() if k not in ("comment", "columns")},
                   indent=2)
        + "\n"
    )
    return sidecar


def write_boundary(path, state, disc: Discretization) -> Path:
    """Dump boundary node coordinates at the quadrature grid.

    Columns are ``theta,x,y`` for one boundary or
    ``theta,x1,y1,x2,y2`` for a doubly-connected state.  A JSON
    sidecar carries the coefficients so consumers can resample the
    curve analytically.
    """
    return write_boundary_payload(path, boundary_payload(state, disc))


def write_curve(path, columns: dict) -> None:
    """Write named columns of equal length as a commented CSV.

    Used for scalar curves such as the inner-radius threshold versus
    alpha.
    """
    path = Path(path)
    names = list(columns)
    arrays = [np.asarray(columns[name], dtype=float) for name in names]
    if not arrays or any(a.ndim != 1 for a in arrays):
        raise DomainError("curve columns must be one-dimensional")
    length = arrays[0].size
    if any(a.size != length for a in arrays):
        raise DomainError("curve columns differ in length")
    lines = [f"# vstates {__version__} curve", ",".join(names)]
    for i in range(length):
        lines.append(",".join(_fmt(a[i]) for a in arrays))
    path.write_text("\n".join(lines) + "\n")
