"""HTTP service exposing the V-state library.

Spectral queries are cheap lookups; solve, sweep and continue run the
Newton machinery synchronously and return branch payloads in the same
shape as the JSON sidecar files.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, branchio, continuation, solver, spectrum
from ..contour import Discretization
from ..errors import ConvergenceError, DomainError, GeometryError, VStateError
from .schemas import (
    B0Request,
    B0Response,
    BoundaryRequest,
    BoundaryResponse,
    BranchModel,
    ContinueRequest,
    EigenRequest,
    EigenResponse,
    NewtonOptions,
    ReportModel,
    SolveRequest,
    SolveResponse,
    SweepRequest,
    ThresholdRequest,
    ThresholdResponse,
)

_ERROR_STATUS = (
    (DomainError, "domain", 422),
    (ConvergenceError, "convergence", 409),
    (GeometryError, "geometry", 412),
)


def _error_response(exc: VStateError) -> JSONResponse:
    for klass, kind, status in _ERROR_STATUS:
        if isinstance(exc, klass):
            return JSONResponse(
                status_code=status,
                content={"error": {"kind": kind, "message": str(exc)}},
            )
    return JSONResponse(
        status_code=500, content={"error": {"kind": "internal", "message": str(exc)}}
    )


def _newton_config(opts: NewtonOptions) -> solver.NewtonConfig:
    return solver.NewtonConfig(
        fd_step=opts.h, tol=opts.tol, max_iter=opts.max_iter, damping=opts.damping
    )


def default_r(b: float | None, fast: bool = False) -> int:
    """Resolution exponent giving N = 256 m (simply) or 64 m (doubly).

    The fast variant halves N twice for quick runs.
    """
    r = 8 if b is None else 6
    return r - 2 if fast else r


def _discretization(m: int, b: float | None, r: int | None) -> Discretization:
    return Discretization(r=r if r is not None else default_r(b), m=m)


def create_app() -> FastAPI:
    app = FastAPI(title="vstates", version=__version__)

    @app.exception_handler(VStateError)
    async def handle_vstate_error(request: Request, exc: VStateError):
        return _error_response(exc)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/version")
    def version() -> dict:
        return {"version": __version__}

    @app.post("/eigen", response_model=EigenResponse, response_model_exclude_none=True)
    def eigen(req: EigenRequest) -> EigenResponse:
        if req.b is None:
            return EigenResponse(
                kind="simply", omega=spectrum.omega_simply(req.m, req.alpha)
            )
        params = spectrum.GsqgParams(alpha=req.alpha, m=req.m, b=req.b)
        pair = spectrum.eigen_omegas(params)
        return EigenResponse(
            kind="doubly",
            omega_plus=pair.omega_plus,
            omega_minus=pair.omega_minus,
            delta=pair.delta,
            simple=pair.simple,
            symmetry_threshold=spectrum.symmetry_threshold(params),
            b0=spectrum.b0_solve(req.alpha),
            limiting_omega_minus=spectrum.limiting_omega_minus(req.b, req.alpha),
        )

    @app.post("/b0", response_model=B0Response)
    def b0(req: B0Request) -> B0Response:
        if not req.alphas:
            raise DomainError("alphas must be non-empty")
        values = [spectrum.b0_solve(alpha, tol=req.tol) for alpha in req.alphas]
        return B0Response(alphas=req.alphas, b0=values)

    @app.post("/threshold", response_model=ThresholdResponse)
    def threshold(req: ThresholdRequest) -> ThresholdResponse:
        params = spectrum.GsqgParams(alpha=req.alpha, m=2, b=req.b)
        return ThresholdResponse(symmetry_threshold=spectrum.symmetry_threshold(params))

    @app.post("/solve", response_model=SolveResponse)
    def solve(req: SolveRequest) -> SolveResponse:
        params = spectrum.GsqgParams(alpha=req.alpha, m=req.m, b=req.b)
        disc = _discretization(req.m, req.b, req.r)
        cfg = _newton_config(req.newton)
        if req.initial is not None:
            state, report = solver.newton_solve(params, disc, req.omega, req.initial, cfg)
        else:
            state, report = solver.solve_seeded(
                params, disc, req.omega, cfg, seed_a1=req.seed_a1
            )
        return SolveResponse(
            kind="simply" if req.b is None else "doubly",
            omega=req.omega,
            report=ReportModel(
                converged=report.converged,
                iterations=report.iterations,
                final_residual=report.final_residual,
                classification=report.classification,
            ),
            coefficients=branchio.coefficient_payload(state),
            r=disc.r,
        )

    @app.post("/sweep", response_model=BranchModel, response_model_by_alias=True)
    def sweep(req: SweepRequest) -> BranchModel:
        params = spectrum.GsqgParams(alpha=req.alpha, m=req.m, b=req.b)
        disc = _discretization(req.m, req.b, req.r)
        branch = solver.sweep_branch(
            params,
            disc,
            req.omega_start,
            req.omega_step,
            omega_stop=req.omega_stop,
            cfg=_newton_config(req.newton),
            seed_a1=req.seed_a1,
            max_points=req.max_points,
        )
        return BranchModel(**branchio.branch_payload(branch))

    @app.post("/continue", response_model=BranchModel, response_model_by_alias=True)
    def continue_(req: ContinueRequest) -> BranchModel:
        branch = branchio.branch_from_payload(req.branch.model_dump(by_alias=True))
        cfg = _newton_config(req.newton) if req.newton is not None else None
        if branch.meta.get("stop") == "failure":
            extended = continuation.continue_past_fold(
                branch,
                req.steps,
                eps=req.eps,
                tol=req.fold_tol,
                cfg=cfg,
                omega_until=req.omega_until,
            )
        else:
            extended = continuation.fold_continue(
                branch, req.steps, cfg=cfg, omega_until=req.omega_until
            )
        return BranchModel(**branchio.branch_payload(extended, arclength=True))

    @app.post("/boundary", response_model=BoundaryResponse)
    def boundary(req: BoundaryRequest) -> BoundaryResponse:
        branch = branchio.branch_from_payload(req.branch.model_dump(by_alias=True))
        if not branch.points:
            raise DomainError("branch has no points to dump")
        try:
            point = branch.points[req.index]
        except IndexError:
            raise DomainError(
                f"point index {req.index} outside branch of {len(branch.points)}"
            ) from None
        return BoundaryResponse(**branchio.boundary_payload(point.state, branch.disc))

    return app


app = create_app()
