"""Request and response models of the V-state service."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class NewtonOptions(BaseModel):
    """Overrides for the Newton iteration."""

    h: float = 1e-9
    tol: float = 1e-11
    max_iter: int = 50
    damping: float = 1.0


class EigenRequest(BaseModel):
    alpha: float
    m: int
    b: float | None = None


class EigenResponse(BaseModel):
    kind: str
    omega: float | None = None  # simply-connected bifurcation velocity
    omega_plus: float | None = None
    omega_minus: float | None = None
    delta: float | None = None
    simple: bool | None = None
    symmetry_threshold: int | None = None
    b0: float | None = None
    limiting_omega_minus: float | None = None


class B0Request(BaseModel):
    alphas: list[float]
    tol: float = 1e-12


class B0Response(BaseModel):
    alphas: list[float]
    b0: list[float]


class ThresholdRequest(BaseModel):
    alpha: float
    b: float


class ThresholdResponse(BaseModel):
    symmetry_threshold: int


class ReportModel(BaseModel):
    converged: bool
    iterations: int
    final_residual: float
    classification: str


class PointModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    lam: float = Field(alias="lambda", serialization_alias="lambda")
    omega: float
    past_fold: bool = False
    report: ReportModel
    coefficients: dict[str, list[float]]


class ParamsModel(BaseModel):
    alpha: float
    b: float | None = None
    m: int


class DiscModel(BaseModel):
    r: int
    m: int


class CfgModel(BaseModel):
    fd_step: float
    tol: float
    max_iter: int
    damping: float


class BranchModel(BaseModel):
    """Wire form of a branch; mirrors the JSON sidecar format."""

    model_config = ConfigDict(populate_by_name=True)

    format: str = "vstates-branch"
    version: str = ""
    kind: str
    arclength: bool = False
    params: ParamsModel
    disc: DiscModel
    cfg: CfgModel
    meta: dict = Field(default_factory=dict)
    points: list[PointModel]


class SolveRequest(BaseModel):
    alpha: float
    m: int
    b: float | None = None
    omega: float
    r: int | None = None
    seed_a1: float = 1e-3
    initial: list[float] | None = None  # explicit start vector, skips the seed ladder
    newton: NewtonOptions = Field(default_factory=NewtonOptions)


class SolveResponse(BaseModel):
    kind: str
    omega: float
    report: ReportModel
    coefficients: dict[str, list[float]]
    r: int


class SweepRequest(BaseModel):
    alpha: float
    m: int
    b: float | None = None
    omega_start: float
    omega_step: float
    omega_stop: float | None = None
    r: int | None = None
    seed_a1: float = 1e-3
    max_points: int = 1000
    newton: NewtonOptions = Field(default_factory=NewtonOptions)


class ContinueRequest(BaseModel):
    branch: BranchModel
    steps: int = 20
    eps: float = 1e-4
    fold_tol: float = 1e-5
    omega_until: float | None = None
    newton: NewtonOptions | None = None


class BoundaryRequest(BaseModel):
    branch: BranchModel
    index: int = -1  # point to dump; negative indexes from the end


class BoundaryResponse(BaseModel):
    format: str
    version: str
    params: dict
    disc: DiscModel
    state: dict
    comment: str
    columns: dict[str, list[float]]
