"""Tests for arclength tagging, Lagrange prediction and fold crossing."""

from __future__ import annotations

import numpy as np
import pytest

import vstates.continuation as cn
import vstates.solver as solver
from vstates.contour import Discretization, DoublyState, SimplyState
from vstates.errors import ConvergenceError, DomainError, PredictionError
from vstates.solver import Branch, BranchPoint, NewtonConfig, SolveReport
from vstates.spectrum import GsqgParams, omega_simply


def _simply_point(omega, a1, lam=0.0, past=False):
    state = SimplyState(0.5, 3, omega, np.array([a1, 0.0, 0.0]))
    report = SolveReport(True, 1, 0.0, "nontrivial")
    return BranchPoint(arclength=lam, omega=omega, state=state, report=report)


def _doubly_point(omega, a11, a21):
    state = DoublyState(0.5, 0.5, 4, omega, np.array([a11, 0.0]), np.array([a21, 0.0]))
    report = SolveReport(True, 1, 0.0, "nontrivial")
    return BranchPoint(arclength=0.0, omega=omega, state=state, report=report)


def test_arclength_tag_equal_increments_on_straight_segment():
    points = [_simply_point(0.1 + 0.1 * k, 0.01 + 0.01 * k) for k in range(5)]
    tags = cn.arclength_tag(points)
    inc = np.hypot(0.1, 0.01)
    assert tags[0] == 0.0
    np.testing.assert_allclose(tags, inc * np.arange(5), rtol=1e-14)


def test_arclength_tag_doubly_uses_both_leading_coefficients():
    points = [_doubly_point(0.1, 0.02, -0.01 - 0.005 * k) for k in range(5)]
    tags = cn.arclength_tag(points)
    np.testing.assert_allclose(tags, 0.005 * np.arange(5), rtol=1e-14)


def test_arclength_tag_rejects_bad_input():
    points = [_simply_point(0.1 + 0.1 * k, 0.01) for k in range(4)]
    with pytest.raises(DomainError):
        cn.arclength_tag(points)
    stalled = [_simply_point(0.2, 0.01) for _ in range(5)]
    with pytest.raises(DomainError):
        cn.arclength_tag(stalled)


def test_lagrange_predict_reproduces_nodes():
    rng = np.random.default_rng(3)
    points = [
        _simply_point(0.3 - 0.05 * k + 0.01 * k * k, 0.02 + 0.015 * k)
        for k in range(5)
    ]
    tags = cn.arclength_tag(points)
    for k in range(5):
        omega, coeffs = cn.lagrange_predict(points, tags[k], tags)
        assert omega == pytest.approx(points[k].omega, rel=1e-14, abs=1e-14)
        np.testing.assert_allclose(
            coeffs, points[k].state.coeffs, rtol=1e-13, atol=1e-15
        )
    del rng


def test_lagrange_predict_exact_on_quartic_data():
    # Degree-four interpolation is exact for degree-four data, so the
    # extrapolated value has an analytic oracle.
    lams = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    poly = np.polynomial.Polynomial([2.0, -1.0, 0.5, -0.1, 0.03])
    points = [_simply_point(poly(lam), 0.01 * (1.0 + lam)) for lam in lams]
    omega, coeffs = cn.lagrange_predict(points, 5.5, lams)
    assert omega == pytest.approx(poly(5.5), rel=1e-12)
    assert coeffs[0] == pytest.approx(0.01 * 6.5, rel=1e-12)


def test_lagrange_predict_constant_branch():
    points = [_simply_point(0.25, 0.03) for _ in range(5)]
    omega, coeffs = cn.lagrange_predict(points, 7.0, np.arange(5.0))
    assert omega == pytest.approx(0.25, rel=1e-14)
    assert coeffs[0] == pytest.approx(0.03, rel=1e-14)


def test_lagrange_predict_length_mismatch():
    points = [_simply_point(0.1 + 0.1 * k, 0.01 + 0.01 * k) for k in range(5)]
    with pytest.raises(DomainError):
        cn.lagrange_predict(points, 1.0, np.arange(4.0))


def _branch(points, params=None, disc=None, meta=None):
    return Branch(
        points=points,
        params=params or GsqgParams(alpha=0.5, m=3),
        disc=disc or Discretization(r=4, m=3),
        cfg=NewtonConfig(),
        meta=meta or {},
    )


def test_fold_continue_validates_input():
    points = [_simply_point(0.1 + 0.1 * k, 0.01 + 0.01 * k) for k in range(4)]
    with pytest.raises(DomainError):
        cn.fold_continue(_branch(points), steps=3)
    points.append(_simply_point(0.5, 0.05))
    with pytest.raises(DomainError):
        cn.fold_continue(_branch(points), steps=0)


def test_fold_continue_prediction_failure(monkeypatch):
    points = [_simply_point(0.1 + 0.1 * k, 0.01 + 0.01 * k) for k in range(5)]

    def always_fails(*args, **kwargs):
        raise ConvergenceError("stalled")

    monkeypatch.setattr(cn, "newton_solve", always_fails)
    with pytest.raises(PredictionError):
        cn.fold_continue(_branch(points), steps=3)


def test_fold_continue_marches_along_smooth_branch():
    # Away from any fold the predictor just extends the branch in
    # omega, with strictly increasing arclength and no fold flags.
    params = GsqgParams(alpha=0.5, m=4, b=0.65)
    disc = Discretization(r=5, m=4)
    branch = solver.sweep_branch(params, disc, 0.085, 0.005, omega_stop=0.125)
    ext = cn.fold_continue(branch, steps=4)
    assert ext.meta["stop"] == "steps"
    assert len(ext.points) == len(branch.points) + 4
    new = ext.points[len(branch.points):]
    assert all(not q.past_fold for q in new)
    assert all(q.report.final_residual < 1e-11 for q in new)
    omegas = [q.omega for q in ext.points]
    assert all(b > a for a, b in zip(omegas, omegas[1:]))
    lams = [q.arclength for q in ext.points]
    assert all(b > a for a, b in zip(lams, lams[1:]))


def test_localize_fold_requires_failure():
    points = [_simply_point(0.1 + 0.1 * k, 0.01 + 0.01 * k) for k in range(5)]
    with pytest.raises(DomainError):
        cn.localize_fold(_branch(points, meta={"stop": "bound"}))


def test_fold_hook_pairs_matching_rule():
    pre = _simply_point(0.5, 0.10)
    near = _simply_point(0.50005, 0.12)
    far_omega = _simply_point(0.51, 0.12)
    close_lead = _simply_point(0.50002, 0.1005)
    post = [
        BranchPoint(q.arclength, q.omega, q.state, q.report, past_fold=True)
        for q in (near, far_omega, close_lead)
    ]
    branch = _branch([pre] + post)
    pairs = cn.fold_hook_pairs(branch)
    assert len(pairs) == 1
    assert pairs[0][0] is pre
    assert pairs[0][1].omega == pytest.approx(0.50005)


@pytest.mark.slow
def test_fold_crossing_turns_omega_back():
    # alpha=0.9, m=3: sweep onto the saddle-node, localize it, and
    # continue onto the far sheet; omega must turn back past the fold
    # while the leading coefficient keeps decreasing.
    params = GsqgParams(alpha=0.9, m=3)
    disc = Discretization(r=6, m=3)
    start = omega_simply(3, 0.9) - 0.002
    branch = solver.sweep_branch(params, disc, start, -0.002)
    assert branch.meta["stop"] == "failure"
    ext = cn.continue_past_fold(branch, steps=10)
    assert ext.meta["omega_c"] == pytest.approx(0.2190, abs=1e-3)
    past = [q for q in ext.points if q.past_fold]
    assert past
    assert max(q.omega for q in past) > ext.meta["omega_c"]
    assert all(q.report.final_residual < 1e-11 for q in ext.points)
    lams = [q.arclength for q in ext.points]
    assert all(b > a for a, b in zip(lams, lams[1:]))
    assert cn.fold_hook_pairs(ext)
