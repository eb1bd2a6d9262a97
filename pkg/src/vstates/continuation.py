"""Arclength continuation of solution branches through fold points.

An omega sweep stalls at a saddle-node because the branch turns back
in omega.  Re-parametrizing by arclength in (omega, leading
coefficient) space removes the turning point: five trailing states
are tagged with cumulative arclength, a degree-four Lagrange
interpolant extrapolates omega and every coefficient one mean
increment ahead, and a plain Newton correction at the predicted omega
lands on the far sheet.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import (
    ConvergenceError,
    DomainError,
    GeometryError,
    PredictionError,
    SingularJacobianError,
)
from .solver import (
    Branch,
    BranchPoint,
    NewtonConfig,
    leading_coefficients,
    newton_solve,
    state_coefficients,
)

_MAX_HALVINGS = 5


def _increment(a: BranchPoint, b: BranchPoint) -> float:
    la, lb = leading_coefficients(a.state), leading_coefficients(b.state)
    return math.sqrt(
        (b.omega - a.omega) ** 2 + sum((y - x) ** 2 for x, y in zip(la, lb))
    )


def arclength_tag(points) -> np.ndarray:
    """Cumulative arclength labels for five consecutive branch points.

    The parameter starts at zero on the first point and grows by the
    Euclidean increment in (omega, a_1) space, with the inner leading
    coefficient a_{2,1} included for doubly-connected states.

    Parameters
    ----------
    points : sequence of BranchPoint
        Exactly five converged states in branch order.

    Returns
    -------
    numpy.ndarray
        Five non-negative values, first exactly zero, strictly
        increasing.

    Raises
    ------
    DomainError
        If the count is not five or two consecutive points coincide.
    """
    if len(points) != 5:
        raise DomainError(f"need exactly 5 branch points, got {len(points)}")
    lams = [0.0]
    for prev, cur in zip(points[:-1], points[1:]):
        inc = _increment(prev, cur)
        if inc == 0.0:
            raise DomainError("coincident branch points give a zero arclength increment")
        lams.append(lams[-1] + inc)
    return np.array(lams)


def _lagrange_weights(lams, lam_new) -> np.ndarray:
    lams = np.asarray(lams, dtype=float)
    weights = np.empty(lams.size)
    for i in range(lams.size):
        num = 1.0
        den = 1.0
        for j in range(lams.size):
            if j == i:
                continue
            num *= lam_new - lams[j]
            den *= lams[i] - lams[j]
        weights[i] = num / den
    return weights


def lagrange_predict(points, lam_new, lams=None):
    """Degree-four Lagrange extrapolation of a branch in arclength.

    Omega and every coefficient are interpolated with the same
    weights, so evaluating at one of the input labels reproduces that
    point.

    Parameters
    ----------
    points : sequence of BranchPoint
        Five states in branch order.
    lam_new : float
        Target arclength; continuation uses values beyond the last
        label.
    lams : array_like, optional
        Arclength labels of the points; computed by
        :func:`arclength_tag` when omitted.

    Returns
    -------
    (float, numpy.ndarray)
        Predicted omega and flat coefficient vector.
    """
    if lams is None:
        lams = arclength_tag(points)
    elif len(lams) != len(points):
        raise DomainError("labels and points differ in length")
    weights = _lagrange_weights(lams, lam_new)
    omega = float(sum(w * p.omega for w, p in zip(weights, points)))
    coeffs = sum(w * state_coefficients(p.state) for w, p in zip(weights, points))
    return omega, coeffs


def _candidate_distance(point: BranchPoint, omega: float, state) -> float:
    la = leading_coefficients(point.state)
    lb = leading_coefficients(state)
    return math.sqrt(
        (omega - point.omega) ** 2 + sum((y - x) ** 2 for x, y in zip(la, lb))
    )


def fold_continue(branch: Branch, steps: int, cfg=None, omega_until=None) -> Branch:
    """Extend a branch by arclength prediction across a fold.

    Each step tags the five trailing points, extrapolates one mean
    arclength increment ahead, and Newton-corrects at the predicted
    omega.  A correction that fails, collapses to the trivial state,
    or lands within a quarter of the last increment of an
    already-known point is retried with the arclength step halved, up
    to five times.  Points where omega has turned back against the
    incoming sweep direction are flagged ``past_fold``.

    Parameters
    ----------
    branch : Branch
        At least five converged points.
    steps : int
        Number of new points to attempt.
    cfg : NewtonConfig, optional
        Defaults to the branch's own configuration.
    omega_until : float, optional
        Stop early once a past-fold point crosses this omega.

    Returns
    -------
    Branch
        New branch holding the input points plus the accepted
        extension; ``meta["stop"]`` is "steps", "target" or
        "prediction_failure".

    Raises
    ------
    PredictionError
        If the very first step exhausts its halvings, i.e. the fold
        cannot be crossed from the given tail.
    """
    if len(branch.points) < 5:
        raise DomainError(
            f"continuation needs at least 5 branch points, got {len(branch.points)}"
        )
    if steps < 1:
        raise DomainError(f"steps must be at least 1, got {steps}")
    cfg = cfg or branch.cfg
    points = list(branch.points)
    meta = dict(branch.meta)
    pre_dir = math.copysign(1.0, points[-1].omega - points[-5].omega)
    accepted = 0
    meta["stop"] = "steps"
    while accepted < steps:
        window = points[-5:]
        lams = arclength_tag(window)
        mean_step = (lams[-1] - lams[0]) / 4.0
        reject_radius = (lams[-1] - lams[-2]) / 4.0
        attempt = mean_step
        result = None
        for _ in range(_MAX_HALVINGS + 1):
            omega_pred, coeffs_pred = lagrange_predict(window, lams[-1] + attempt, lams)
            try:
                state, report = newton_solve(
                    branch.params, branch.disc, omega_pred, coeffs_pred, cfg
                )
            except (ConvergenceError, SingularJacobianError, GeometryError):
                attempt /= 2.0
                continue
            if report.classification == "trivial":
                attempt /= 2.0
                continue
            if min(_candidate_distance(p, omega_pred, state) for p in window) < reject_radius:
                attempt /= 2.0
                continue
            # A correction that lands far beyond the prediction scale has
            # hopped to another sheet; treat it like a failed step.
            if _candidate_distance(window[-1], omega_pred, state) > 5.0 * attempt:
                attempt /= 2.0
                continue
            result = (omega_pred, state, report)
            break
        if result is None:
            if accepted == 0:
                raise PredictionError(
                    f"no acceptable point after {_MAX_HALVINGS} step halvings "
                    f"past omega={points[-1].omega}"
                )
            meta["stop"] = "prediction_failure"
            meta["failure_omega"] = points[-1].omega
            break
        omega_new, state, report = result
        prev = points[-1]
        past = prev.past_fold or (omega_new - prev.omega) * pre_dir < 0.0
        points.append(
            BranchPoint(
                arclength=prev.arclength + _candidate_distance(prev, omega_new, state),
                omega=omega_new,
                state=state,
                report=report,
                past_fold=past,
            )
        )
        accepted += 1
        if (
            omega_until is not None
            and past
            and (omega_new - omega_until) * pre_dir <= 0.0
        ):
            meta["stop"] = "target"
            break
    extremum = max if pre_dir > 0 else min
    meta["fold_omega"] = extremum(p.omega for p in points)
    meta["last_omega"] = points[-1].omega
    return Branch(points=points, params=branch.params, disc=branch.disc, cfg=cfg, meta=meta)


def localize_fold(branch: Branch, tol=1e-5, cfg=None, jump_guard=None):
    """Bisect the fold omega behind a failed sweep.

    The sweep's last convergent omega and its recorded failure omega
    bracket the fold; warm-started Newton solves shrink the bracket
    until it is narrower than tol.  Close to the fold the warm start
    can wander onto the opposite sheet, so a converged state counts
    as solvable only when it stays near its warm start in
    (omega, leading coefficient) space.

    Parameters
    ----------
    branch : Branch
        Must have stopped with ``meta["stop"] == "failure"``.
    tol : float
        Final bracket width.
    cfg : NewtonConfig, optional
    jump_guard : float, optional
        Maximum accepted move in leading coefficients per bisection
        solve; defaults to five times the sweep's final increment,
        floored at 0.02.

    Returns
    -------
    (float, BranchPoint)
        The last convergent omega (the fold estimate) and its state.
    """
    if branch.meta.get("stop") != "failure":
        raise DomainError("fold localization needs a sweep that stopped on failure")
    if tol <= 0.0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    cfg = cfg or branch.cfg
    good_point = branch.points[-1]
    if jump_guard is None:
        if len(branch.points) >= 2:
            last_inc = _increment(branch.points[-2], branch.points[-1])
        else:
            last_inc = 0.0
        jump_guard = max(0.02, 5.0 * last_inc)
    good = good_point.omega
    bad = branch.meta["failure_omega"]
    while abs(bad - good) > tol:
        mid = 0.5 * (good + bad)
        try:
            state, report = newton_solve(
                branch.params, branch.disc, mid, state_coefficients(good_point.state), cfg
            )
        except (ConvergenceError, SingularJacobianError, GeometryError):
            bad = mid
            continue
        if report.classification == "trivial":
            bad = mid
            continue
        moved = math.sqrt(
            sum(
                (y - x) ** 2
                for x, y in zip(
                    leading_coefficients(good_point.state), leading_coefficients(state)
                )
            )
        )
        if moved > jump_guard:
            bad = mid
            continue
        good = mid
        good_point = BranchPoint(
            arclength=good_point.arclength, omega=mid, state=state, report=report
        )
    return good, good_point


def fold_stencil(branch: Branch, omega_c, point: BranchPoint, eps=1e-4, cfg=None) -> Branch:
    """Five converged states marching onto a localized fold.

    Walks from the sweep's last point toward omega_c in steps of eps,
    warm-starting each solve from its neighbor so the iteration stays
    on the incoming sheet even where the Jacobian degenerates, and
    ends on the localized state itself.  The stencil is the last five
    converged states of that walk.

    Parameters
    ----------
    branch : Branch
        The sweep that found the fold; fixes params and disc.
    omega_c : float
        Localized fold omega.
    point : BranchPoint
        Converged state at omega_c, as returned by
        :func:`localize_fold`.
    eps : float
        Walk spacing in omega.
    cfg : NewtonConfig, optional

    Returns
    -------
    Branch
        Five points ending at omega_c, with the fold omega and
        spacing recorded in ``meta``.
    """
    if eps <= 0.0:
        raise DomainError(f"stencil spacing must be positive, got {eps}")
    if not branch.points:
        raise DomainError("stencil needs a branch with at least one point")
    cfg = cfg or branch.cfg
    start = branch.points[-1]
    direction = math.copysign(1.0, omega_c - start.omega)
    jump_guard = 0.02
    pool: list[tuple[float, object, object]] = [
        (p.omega, p.state, p.report) for p in branch.points
    ]
    omega = start.omega
    warm = state_coefficients(start.state)
    prev_state = start.state
    while (omega_c - (omega + direction * eps)) * direction >= -eps / 4.0:
        omega += direction * eps
        try:
            state, report = newton_solve(branch.params, branch.disc, omega, warm, cfg)
        except (ConvergenceError, SingularJacobianError, GeometryError):
            break
        if report.classification == "trivial":
            break
        moved = math.sqrt(
            sum(
                (y - x) ** 2
                for x, y in zip(
                    leading_coefficients(prev_state), leading_coefficients(state)
                )
            )
        )
        if moved > jump_guard:
            break
        pool.append((omega, state, report))
        warm = state_coefficients(state)
        prev_state = state
    if _candidate_distance(
        BranchPoint(arclength=0.0, omega=pool[-1][0], state=pool[-1][1], report=pool[-1][2]),
        omega_c,
        point.state,
    ) > 0.0:
        pool.append((omega_c, point.state, point.report))
    if len(pool) < 5:
        raise DomainError(
            "could not assemble five stencil states; reduce the stencil spacing"
        )
    points = []
    arclen = 0.0
    for omega, state, report in pool[-5:]:
        if points:
            arclen += _candidate_distance(points[-1], omega, state)
        points.append(
            BranchPoint(arclength=arclen, omega=omega, state=state, report=report)
        )
    meta = {"omega_c": float(omega_c), "epsilon": float(eps), "stop": "stencil"}
    return Branch(points=points, params=branch.params, disc=branch.disc, cfg=cfg, meta=meta)


def continue_past_fold(
    branch: Branch, steps: int, eps=1e-4, tol=1e-5, cfg=None, omega_until=None
) -> Branch:
    """Full fold crossing behind a failed sweep.

    Localizes the fold by bisection, rebuilds a five-point stencil
    approaching it, and runs the arclength predictor onto the far
    sheet.  The returned branch carries the fold omega and stencil
    spacing in its metadata.
    """
    omega_c, point = localize_fold(branch, tol=tol, cfg=cfg)
    stencil = fold_stencil(branch, omega_c, point, eps=eps, cfg=cfg)
    return fold_continue(stencil, steps, cfg=cfg, omega_until=omega_until)


def fold_hook_pairs(branch: Branch, omega_tol=1e-4, lead_tol=1e-3):
    """Pairs of states on opposite fold sheets at matching omega.

    A fold shows up as two distinct states with (numerically) the
    same angular velocity: one before the turning point and one
    after, separated in the leading coefficient.

    Parameters
    ----------
    branch : Branch
    omega_tol : float
        Maximum omega difference within a pair.
    lead_tol : float
        Minimum separation in the first leading coefficient.

    Returns
    -------
    list of (BranchPoint, BranchPoint)
        (pre-fold, post-fold) pairs.
    """
    pre = [p for p in branch.points if not p.past_fold]
    post = [p for p in branch.points if p.past_fold]
    pairs = []
    for a in pre:
        for b in post:
            if abs(a.omega - b.omega) >= omega_tol:
                continue
            la, lb = leading_coefficients(a.state), leading_coefficients(b.state)
            if abs(la[0] - lb[0]) > lead_tol:
                pairs.append((a, b))
    return pairs
