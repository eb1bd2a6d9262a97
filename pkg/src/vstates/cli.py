"""Command-line client of the V-state service.

All physics runs behind the HTTP service; this module assembles
requests, maps error payloads onto exit codes and handles file
output.  By default the service is hosted in-process, so the CLI
works standalone; ``--server`` targets a remote instance instead.

Exit codes: 0 success, 1 solve converged to the trivial root,
2 domain error, 3 convergence failure, 4 geometry failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, branchio
from .errors import ConvergenceError, DomainError, GeometryError, VStateError

_EXIT_TRIVIAL = 1
_EXIT_BY_STATUS = {422: 2, 409: 3, 412: 4}

# default alpha grid of the b0 subcommand: two near-zero samples plus
# a uniform 0.005 grid over (0, 1)
_B0_ALPHAS = [1e-4, 1e-3] + [round(0.005 * i, 3) for i in range(1, 200)]


class _ServiceFailure(Exception):
    """A non-200 service response, carrying the mapped exit code."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def _exit_code_for(exc: VStateError) -> int:
    if isinstance(exc, ConvergenceError):
        return 3
    if isinstance(exc, GeometryError):
        return 4
    return 2


def _client(server: str | None):
    if server is None:
        import warnings

        with warnings.catch_warnings():
            # the test client pulls in a deprecation notice about its
            # transport backend; irrelevant to CLI users
            warnings.simplefilter("ignore")
            from fastapi.testclient import TestClient

        from .service import create_app

        return TestClient(create_app())
    import httpx

    return httpx.Client(base_url=server, timeout=None)


def _post(client, path: str, payload: dict) -> dict:
    resp = client.post(path, json=payload)
    if resp.status_code == 200:
        return resp.json()
    try:
        message = resp.json()["error"]["message"]
    except Exception:
        message = resp.text
    code = _EXIT_BY_STATUS.get(resp.status_code)
    if code is None:
        raise _ServiceFailure(2, f"internal failure ({resp.status_code}): {message}")
    raise _ServiceFailure(code, message)


def _g(x) -> str:
    return f"{float(x):.17g}"


def _print_table(names: list[str], row: list[str]) -> None:
    print(",".join(names))
    print(",".join(row))


def _newton_payload(args) -> dict:
    return {"h": args.h, "tol": args.tol}


def _resolution(args) -> int | None:
    if args.r is not None:
        return args.r
    if args.fast:
        from .service import default_r

        return default_r(args.b, fast=True)
    return None  # service default


def cmd_eigen(client, args) -> int:
    payload = {"alpha": args.alpha, "m": args.m, "b": args.b}
    body = _post(client, "/eigen", payload)
    if args.format == "json":
        print(json.dumps(body, indent=2))
        return 0
    if body["kind"] == "simply":
        _print_table(["omega"], [_g(body["omega"])])
    else:
        names = [
            "omega_plus",
            "omega_minus",
            "delta",
            "simple",
            "symmetry_threshold",
            "b0",
            "limiting_omega_minus",
        ]
        row = [
            _g(body["omega_plus"]),
            _g(body["omega_minus"]),
            _g(body["delta"]),
            str(int(body["simple"])),
            str(body["symmetry_threshold"]),
            _g(body["b0"]),
            _g(body["limiting_omega_minus"]),
        ]
        _print_table(names, row)
    return 0


def cmd_b0(client, args) -> int:
    alphas = args.alpha if args.alpha else _B0_ALPHAS
    body = _post(client, "/b0", {"alphas": alphas, "tol": args.tol})
    if args.out is not None:
        out = Path(args.out)
        if args.format == "json":
            out.write_text(json.dumps(body, indent=2) + "\n")
        else:
            branchio.write_curve(out, {"alpha": body["alphas"], "b0": body["b0"]})
        print(f"wrote {out}")
        return 0
    if args.format == "json":
        print(json.dumps(body, indent=2))
    else:
        print("alpha,b0")
        for a, b in zip(body["alphas"], body["b0"]):
            print(f"{_g(a)},{_g(b)}")
    return 0


def cmd_threshold(client, args) -> int:
    body = _post(client, "/threshold", {"alpha": args.alpha, "b": args.b})
    if args.format == "json":
        print(json.dumps(body, indent=2))
    else:
        _print_table(["symmetry_threshold"], [str(body["symmetry_threshold"])])
    return 0


def _one_point_branch(args, body: dict) -> dict:
    """Wrap a single solve response in the branch payload format."""
    return {
        "format": "vstates-branch",
        "version": __version__,
        "kind": body["kind"],
        "arclength": False,
        "params": {"alpha": args.alpha, "b": args.b, "m": args.m},
        "disc": {"r": body["r"], "m": args.m},
        "cfg": {"fd_step": args.h, "tol": args.tol, "max_iter": 50, "damping": 1.0},
        "meta": {"source": "solve"},
        "points": [
            {
                "lambda": 0.0,
                "omega": body["omega"],
                "past_fold": False,
                "report": body["report"],
                "coefficients": body["coefficients"],
            }
        ],
    }


def cmd_solve(client, args) -> int:
    payload = {
        "alpha": args.alpha,
        "m": args.m,
        "b": args.b,
        "omega": args.omega,
        "r": _resolution(args),
        "seed_a1": args.seed_a1,
        "newton": _newton_payload(args),
    }
    body = _post(client, "/solve", payload)
    branch_payload = _one_point_branch(args, body)
    out = Path(args.out)
    branchio.write_branch(out, branchio.branch_from_payload(branch_payload))
    boundary = _post(client, "/boundary", {"branch": branch_payload, "index": 0})
    boundary_path = out.with_name(out.stem + "_boundary.csv")
    branchio.write_boundary_payload(boundary_path, boundary)
    report = body["report"]
    if args.format == "json":
        print(json.dumps(body, indent=2))
    else:
        print(
            f"omega={_g(body['omega'])} classification={report['classification']} "
            f"residual={report['final_residual']:.3e} iterations={report['iterations']}"
        )
    print(f"wrote {out} {boundary_path}")
    if report["classification"] == "trivial":
        print("note: converged to the trivial root", file=sys.stderr)
        return _EXIT_TRIVIAL
    return 0


def cmd_sweep(client, args) -> int:
    payload = {
        "alpha": args.alpha,
        "m": args.m,
        "b": args.b,
        "omega_start": args.omega_start,
        "omega_step": args.omega_step,
        "omega_stop": args.omega_end,
        "r": _resolution(args),
        "seed_a1": args.seed_a1,
        "newton": _newton_payload(args),
    }
    body = _post(client, "/sweep", payload)
    branch = branchio.branch_from_payload(body)
    out = Path(args.out)
    branchio.write_branch(out, branch)
    if args.format == "json":
        print(json.dumps({"points": len(branch.points), "meta": branch.meta}, indent=2))
    else:
        print(
            f"points={len(branch.points)} stop={branch.meta.get('stop')} "
            f"last_omega={_g(branch.meta.get('last_omega', float('nan')))}"
        )
    print(f"wrote {out}")
    return 0


def cmd_continue(client, args) -> int:
    branch = branchio.read_branch(args.in_path)
    payload = {
        "branch": branchio.branch_payload(branch),
        "steps": args.steps,
        "eps": args.eps,
        "fold_tol": args.fold_tol,
        "omega_until": args.omega_end,
    }
    body = _post(client, "/continue", payload)
    extended = branchio.branch_from_payload(body)
    out = Path(args.out)
    branchio.write_branch(out, extended, arclength=True)
    meta = extended.meta
    if args.format == "json":
        print(json.dumps({"points": len(extended.points), "meta": meta}, indent=2))
    else:
        fold = meta.get("fold_omega")
        fold_part = f" fold_omega={_g(fold)}" if fold is not None else ""
        print(
            f"points={len(extended.points)} stop={meta.get('stop')}"
            f"{fold_part} last_omega={_g(meta.get('last_omega', float('nan')))}"
        )
    print(f"wrote {out}")
    return 0


def cmd_dump_boundary(client, args) -> int:
    branch = branchio.read_branch(args.in_path)
    if not branch.points:
        raise DomainError(f"no points in {args.in_path}")
    if args.omega is None:
        index = len(branch.points) - 1
    else:
        index = int(
            np.argmin([abs(p.omega - args.omega) for p in branch.points])
        )
    body = _post(
        client, "/boundary", {"branch": branchio.branch_payload(branch), "index": index}
    )
    out = Path(args.out)
    branchio.write_boundary_payload(out, body)
    print(f"wrote {out} (omega={_g(body['params']['omega'])})")
    return 0


def _add_common(sub) -> None:
    sub.add_argument("--server", help="base URL of a running service (default: in-process)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_newton(sub) -> None:
    sub.add_argument("--h", type=float, default=1e-9, help="finite-difference step")
    sub.add_argument("--tol", type=float, default=1e-11, help="Newton residual tolerance")


def _add_problem(sub, need_omega: bool) -> None:
    sub.add_argument("--alpha", type=float, required=True)
    sub.add_argument("--m", type=int, required=True, help="fold symmetry")
    sub.add_argument("--b", type=float, help="inner radius; omit for one boundary")
    if need_omega:
        sub.add_argument("--omega", type=float, required=True, help="angular velocity")
    sub.add_argument("--r", type=int, help="resolution exponent (default from b)")
    sub.add_argument("--fast", action="store_true", help="quarter the default node count")
    sub.add_argument("--seed-a1", type=float, default=1e-3, dest="seed_a1")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vstate", description="rotating vortex-patch equilibria"
    )
    parser.add_argument("--version", action="version", version=f"vstate {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    eigen = commands.add_parser("eigen", help="bifurcation angular velocities")
    eigen.add_argument("--alpha", type=float, required=True)
    eigen.add_argument("--m", type=int, required=True)
    eigen.add_argument("--b", type=float)
    _add_common(eigen)
    eigen.set_defaults(func=cmd_eigen)

    b0 = commands.add_parser("b0", help="inner radius below which all modes bifurcate")
    b0.add_argument("--alpha", type=float, action="append",
                    help="repeatable; omit for the default grid over (0,1)")
    b0.add_argument("--tol", type=float, default=1e-12)
    b0.add_argument("--out", help="write csv/json here instead of stdout")
    _add_common(b0)
    b0.set_defaults(func=cmd_b0)

    threshold = commands.add_parser(
        "threshold", help="symmetry threshold of an annulus"
    )
    threshold.add_argument("--alpha", type=float, required=True)
    threshold.add_argument("--b", type=float, required=True)
    _add_common(threshold)
    threshold.set_defaults(func=cmd_threshold)

    solve = commands.add_parser("solve", help="one Newton solve, written as branch + boundary")
    _add_problem(solve, need_omega=True)
    _add_newton(solve)
    solve.add_argument("--out", required=True, help="branch csv path")
    _add_common(solve)
    solve.set_defaults(func=cmd_solve)

    sweep = commands.add_parser("sweep", help="march a branch in omega")
    _add_problem(sweep, need_omega=False)
    sweep.add_argument("--omega-start", type=float, required=True, dest="omega_start")
    sweep.add_argument("--omega-step", type=float, required=True, dest="omega_step")
    sweep.add_argument("--omega-end", type=float, dest="omega_end",
                       help="stop bound; omit to run until failure")
    _add_newton(sweep)
    sweep.add_argument("--out", required=True, help="branch csv path")
    _add_common(sweep)
    sweep.set_defaults(func=cmd_sweep)

    cont = commands.add_parser(
        "continue", help="extend a swept branch by arclength continuation"
    )
    cont.add_argument("--in", required=True, dest="in_path", help="branch csv to extend")
    cont.add_argument("--steps", type=int, default=20)
    cont.add_argument("--eps", type=float, default=1e-4, help="fold stencil spacing")
    cont.add_argument("--fold-tol", type=float, default=1e-5, dest="fold_tol",
                      help="fold localization tolerance in omega")
    cont.add_argument("--omega-end", type=float, dest="omega_end",
                      help="stop once omega passes this value beyond the fold")
    cont.add_argument("--out", required=True, help="extended branch csv path")
    _add_common(cont)
    cont.set_defaults(func=cmd_continue)

    dump = commands.add_parser("dump-boundary", help="boundary coordinates of one state")
    dump.add_argument("--in", required=True, dest="in_path", help="branch csv to read")
    dump.add_argument("--omega", type=float,
                      help="pick the point nearest this omega (default: last)")
    dump.add_argument("--out", required=True, help="boundary csv path")
    _add_common(dump)
    dump.set_defaults(func=cmd_dump_boundary)

    return parser


def main(argv: list[str] | None = None) -> int:
    """Entry point; returns the process exit code."""
    args = _build_parser().parse_args(argv)
    try:
        client = _client(args.server)
        try:
            return args.func(client, args)
        finally:
            client.close()
    except _ServiceFailure as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.code
    except VStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
