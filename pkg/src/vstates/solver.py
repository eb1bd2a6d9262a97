"""Newton iteration on the sine-residual map and omega-sweep branches.

The unknowns are the cosine amplitudes of one boundary (simply
connected) or of both boundaries stacked [outer; inner] (doubly
connected); the residual is the matching stack of sine coefficients
from :mod:`vstates.contour`.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .contour import (
    Discretization,
    DoublyState,
    SimplyState,
    residual_doubly,
    residual_simply,
)
from .errors import (
    ConvergenceError,
    DomainError,
    GeometryError,
    SingularJacobianError,
)
from .spectrum import GsqgParams, eigen_omegas, kernel_generator

# A state whose largest amplitude stays below this is the circle or
# annulus again, not a genuine V-state.
_TRIVIAL_THRESHOLD = 1e-8

_COND_LIMIT = 1e14


@dataclass(frozen=True)
class NewtonConfig:
    """Knobs of the Newton iteration."""

    fd_step: float = 1e-9  # forward-difference step for the Jacobian
    tol: float = 1e-11  # stopping bound on the residual max-norm
    max_iter: int = 50
    damping: float = 1.0  # step fraction, 1 = full Newton

    def __post_init__(self) -> None:
        if not self.fd_step > 0.0:
            raise DomainError(f"fd step must be positive, got {self.fd_step}")
        if not self.tol > 0.0:
            raise DomainError(f"tolerance must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be at least 1, got {self.max_iter}")
        if not 0.0 < self.damping <= 1.0:
            raise DomainError(f"damping must lie in (0, 1], got {self.damping}")


@dataclass(frozen=True)
class SolveReport:
    """Outcome summary of one Newton solve."""

    converged: bool
    iterations: int
    final_residual: float
    classification: str  # "trivial" or "nontrivial"


@dataclass(frozen=True, eq=False)
class BranchPoint:
    """One converged state on a branch."""

    arclength: float  # cumulative (omega, leading-coefficient) arclength
    omega: float
    state: SimplyState | DoublyState
    report: SolveReport
    past_fold: bool = False  # set by fold continuation beyond the critical omega


@dataclass(eq=False)
class Branch:
    """Ordered branch of converged states plus provenance."""

    points: list[BranchPoint]
    params: GsqgParams
    disc: Discretization
    cfg: NewtonConfig
    meta: dict = field(default_factory=dict)

    def omegas(self) -> np.ndarray:
        return np.array([p.omega for p in self.points])


def _worker_count() -> int:
    avail = os.cpu_count() or 1
    cap = os.environ.get("VSTATE_THREADS")
    if cap is None or not cap.strip():
        return avail
    try:
        return max(1, min(avail, int(cap)))
    except ValueError:
        raise DomainError(f"VSTATE_THREADS must be an integer, got {cap!r}") from None


def residual_map(params: GsqgParams, disc: Discretization, omega: float):
    """Flatten the contour residual into a vector map for Newton.

    Parameters
    ----------
    params : GsqgParams
        alpha, fold and (for doubly-connected) inner radius.
    disc : Discretization
        Grid, fold-matched to params.
    omega : float
        Angular velocity, held fixed by the map.

    Returns
    -------
    callable
        Maps a coefficient vector (length M, or 2M stacked
        [outer; inner]) to the matching sine-residual vector.
    """
    if params.b is None:

        def rmap(flat):
            state = SimplyState(params.alpha, params.m, omega, flat)
            return residual_simply(state, disc).sines

    else:
        n_modes = disc.n_modes

        def rmap(flat):
            state = DoublyState(
                params.alpha, params.b, params.m, omega, flat[:n_modes], flat[n_modes:]
            )
            r1, r2 = residual_doubly(state, disc)
            return np.concatenate([r1.sines, r2.sines])

    return rmap


def fd_jacobian(rmap, coeffs, cfg: NewtonConfig, base=None):
    """Forward-difference Jacobian of a residual map.

    Columns are independent residual evaluations and run on a thread
    pool capped by the ``VSTATE_THREADS`` environment variable; they
    are assembled in index order, so the result does not depend on
    scheduling.

    Parameters
    ----------
    rmap : callable
        Vector residual map.
    coeffs : array_like
        Expansion point.
    cfg : NewtonConfig
        Supplies the step ``fd_step``.
    base : numpy.ndarray, optional
        Precomputed ``rmap(coeffs)``, to avoid one evaluation.

    Returns
    -------
    numpy.ndarray
        Matrix with column j = [F(x + h e_j) - F(x)] / h.
    """
    x = np.asarray(coeffs, dtype=float)
    if base is None:
        base = rmap(x)
    h = cfg.fd_step

    def column(j):
        bumped = x.copy()
        bumped[j] += h
        return (rmap(bumped) - base) / h

    workers = _worker_count()
    if workers > 1 and x.size > 1:
        with ThreadPoolExecutor(max_workers=min(workers, x.size)) as pool:
            cols = list(pool.map(column, range(x.size)))
    else:
        cols = [column(j) for j in range(x.size)]
    return np.column_stack(cols)


def _flip(coeffs):
    # Rotation by pi/m: a_k -> (-1)^k a_k.  An exact relabel of the grid
    # samples, so it maps solutions to solutions bit-for-bit.
    signs = np.where(np.arange(1, coeffs.size + 1) % 2 == 1, -1.0, 1.0)
    return coeffs * signs


def _normalize(params: GsqgParams, flat, n_modes):
    if params.b is None:
        if flat[0] < 0.0:
            return _flip(flat)
        return flat
    a11, a21 = flat[0], flat[n_modes]
    dominant_outer = abs(a11) >= abs(a21)
    if (dominant_outer and a11 < 0.0) or (not dominant_outer and a21 > 0.0):
        return np.concatenate([_flip(flat[:n_modes]), _flip(flat[n_modes:])])
    return flat


def _flat_size(params: GsqgParams, disc: Discretization) -> int:
    return disc.n_modes if params.b is None else 2 * disc.n_modes


def _to_state(params: GsqgParams, disc: Discretization, omega: float, flat):
    if params.b is None:
        return SimplyState(params.alpha, params.m, omega, flat)
    n_modes = disc.n_modes
    return DoublyState(
        params.alpha, params.b, params.m, omega, flat[:n_modes], flat[n_modes:]
    )


def state_coefficients(state) -> np.ndarray:
    """Flat coefficient vector of a state ([outer; inner] when doubly)."""
    if isinstance(state, SimplyState):
        return state.coeffs.copy()
    return np.concatenate([state.outer, state.inner])


def leading_coefficients(state) -> tuple[float, ...]:
    """(a_1,) or (a_{1,1}, a_{2,1}), the arclength coordinates."""
    if isinstance(state, SimplyState):
        return (float(state.coeffs[0]),)
    return (float(state.outer[0]), float(state.inner[0]))


def newton_solve(params, disc, omega, initial_coeffs, cfg=None):
    """Newton iteration from an initial coefficient vector.

    Parameters
    ----------
    params : GsqgParams
        Problem parameters; b = None selects the simply-connected map.
    disc : Discretization
        Grid, fold-matched to params.
    omega : float
        Angular velocity.
    initial_coeffs : array_like
        Start vector, length M (simply) or 2M (doubly).
    cfg : NewtonConfig, optional

    Returns
    -------
    (state, SolveReport)
        Converged, sign-normalized state and its report.

    Raises
    ------
    ConvergenceError
        If max_iter iterations do not reach tol.
    SingularJacobianError
        If the Jacobian condition number exceeds 1e14.
    GeometryError
        If an iterate leaves the set of valid curves.
    """
    cfg = cfg or NewtonConfig()
    rmap = residual_map(params, disc, omega)
    x = np.array(initial_coeffs, dtype=float)
    expected = _flat_size(params, disc)
    if x.shape != (expected,):
        raise DomainError(
            f"initial vector has shape {x.shape}, expected ({expected},)"
        )
    f = rmap(x)
    res = float(np.max(np.abs(f)))
    iterations = 0
    while res >= cfg.tol:
        if iterations >= cfg.max_iter:
            raise ConvergenceError(
                f"Newton did not reach tol={cfg.tol:.1e} within "
                f"{cfg.max_iter} iterations (residual {res:.3e}, omega={omega})"
            )
        jac = fd_jacobian(rmap, x, cfg, base=f)
        cond = np.linalg.cond(jac)
        if not np.isfinite(cond) or cond > _COND_LIMIT:
            raise SingularJacobianError(
                f"Jacobian condition {cond:.3e} exceeds {_COND_LIMIT:.0e} "
                f"at omega={omega}"
            )
        x = x - cfg.damping * np.linalg.solve(jac, f)
        f = rmap(x)
        res = float(np.max(np.abs(f)))
        iterations += 1
    x = _normalize(params, x, disc.n_modes)
    res = float(np.max(np.abs(rmap(x))))  # fresh certificate on the normal form
    classification = (
        "trivial" if np.max(np.abs(x)) < _TRIVIAL_THRESHOLD else "nontrivial"
    )
    return _to_state(params, disc, omega, x), SolveReport(
        converged=True,
        iterations=iterations,
        final_residual=res,
        classification=classification,
    )


def _seed_vector(params, disc, omega, eps):
    flat = np.zeros(_flat_size(params, disc))
    if params.b is None:
        flat[0] = eps
        return flat
    # Seed along the dispersion kernel of the nearer eigen-velocity so
    # both boundaries start on the right branch; fall back to a plain
    # (outer, -inner) kick when no eigen-pair exists.
    try:
        pair = eigen_omegas(params)
        target = (
            pair.omega_plus
            if abs(omega - pair.omega_plus) <= abs(omega - pair.omega_minus)
            else pair.omega_minus
        )
        v = kernel_generator(params, target)
        v = v / np.max(np.abs(v))
        if v[1] > 0.0:
            v = -v
    except DomainError:
        v = np.array([1.0, -1.0])
    flat[0] = eps * v[0]
    flat[disc.n_modes] = eps * v[1]
    return flat


def solve_seeded(params, disc, omega, cfg=None, seed_a1=1e-3):
    """Newton solve from the standard small perturbation of the circle
    or annulus, escalating the seed tenfold (up to 0.1) whenever the
    iteration falls back onto the trivial solution.

    Returns
    -------
    (state, SolveReport)
        The first nontrivial converged state, or the last trivial one
        when every seed collapses.

    Raises
    ------
    ConvergenceError, SingularJacobianError, GeometryError
        When no seed on the ladder produces any converged state, the
        last failure is re-raised.
    """
    if not 0.0 < seed_a1 <= 0.1:
        raise DomainError(f"seed amplitude must lie in (0, 0.1], got {seed_a1}")
    last = None
    last_err = None
    eps = seed_a1
    while eps <= 0.1 * (1.0 + 1e-12):
        try:
            state, report = newton_solve(
                params, disc, omega, _seed_vector(params, disc, omega, eps), cfg
            )
        except (ConvergenceError, SingularJacobianError, GeometryError) as exc:
            last_err = exc
        else:
            last = (state, report)
            if report.classification == "nontrivial":
                return state, report
        eps *= 10.0
    if last is not None:
        return last
    raise last_err


def _increment(prev: BranchPoint, omega, state) -> float:
    lead_prev = leading_coefficients(prev.state)
    lead = leading_coefficients(state)
    return math.sqrt(
        (omega - prev.omega) ** 2
        + sum((a - b) ** 2 for a, b in zip(lead, lead_prev))
    )


def _lead_distance(a, b) -> float:
    la = leading_coefficients(a)
    lb = leading_coefficients(b)
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(la, lb)))


def sweep_branch(
    params,
    disc,
    omega_start,
    omega_step,
    omega_stop=None,
    cfg=None,
    seed_a1=1e-3,
    max_points=1000,
):
    """March in omega, warm-starting each solve from the previous state.

    Parameters
    ----------
    params : GsqgParams
    disc : Discretization
    omega_start : float
        First omega; must lie strictly on the solvable side of the
        bifurcation.
    omega_step : float
        Signed increment.
    omega_stop : float, optional
        Inclusive bound; omitted means sweep until failure.
    cfg : NewtonConfig, optional
    seed_a1 : float
        Seed amplitude for the first point.
    max_points : int
        Safety cap on branch length.

    Returns
    -------
    Branch
        Converged nontrivial points in sweep order.  ``meta["stop"]``
        records why the sweep ended ("bound", "failure", "trivial" or
        "max_points"), with the offending omega alongside.
    """
    if omega_step == 0.0:
        raise DomainError("omega_step must be nonzero")
    cfg = cfg or NewtonConfig()
    points: list[BranchPoint] = []
    meta: dict = {}
    warm = None
    arclen = 0.0
    guard = abs(omega_step) * 1e-9
    index = 0
    while True:
        omega = float(omega_start) + index * float(omega_step)
        if len(points) >= max_points:
            meta["stop"] = "max_points"
            break
        if omega_stop is not None and (
            (omega_step > 0 and omega > omega_stop + guard)
            or (omega_step < 0 and omega < omega_stop - guard)
        ):
            meta["stop"] = "bound"
            break
        try:
            if warm is None:
                state, report = solve_seeded(params, disc, omega, cfg, seed_a1)
            else:
                state, report = newton_solve(params, disc, omega, warm, cfg)
        except (ConvergenceError, SingularJacobianError, GeometryError) as exc:
            meta["stop"] = "failure"
            meta["failure_omega"] = omega
            meta["reason"] = str(exc)
            break
        if report.classification == "trivial":
            meta["stop"] = "trivial"
            meta["trivial_omega"] = omega
            break
        if points:
            # a warm start that converges far from its predecessor has
            # slid onto another solution sheet (seen just past a fold,
            # where the near-singular Jacobian lets Newton wander);
            # record it as a failure so fold localization can take over
            move = _lead_distance(points[-1].state, state)
            jump_guard = 0.1 if len(points) == 1 else max(0.02, 5.0 * prev_move)
            if move > jump_guard:
                meta["stop"] = "failure"
                meta["failure_omega"] = omega
                meta["reason"] = (
                    f"warm start left the branch (leading-coefficient move "
                    f"{move:.3g} exceeds guard {jump_guard:.3g})"
                )
                break
            prev_move = move
            arclen += _increment(points[-1], omega, state)
        points.append(
            BranchPoint(arclength=arclen, omega=omega, state=state, report=report)
        )
        warm = state_coefficients(state)
        index += 1
    if points:
        meta["last_omega"] = points[-1].omega
    return Branch(points=points, params=params, disc=disc, cfg=cfg, meta=meta)
