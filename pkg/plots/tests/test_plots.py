"""Tests for the figure scripts against the shipped CLI outputs."""

from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

import figio
import plot_b0_curve
import plot_bifurcation
import plot_boundaries

DATA = Path(__file__).resolve().parent.parent / "data"
B0 = DATA / "b0_curve.csv"
DOUBLY = [DATA / "branch_doubly_upper.csv", DATA / "branch_doubly_lower.csv"]
FOLD = [DATA / "branch_m3_sweep.csv", DATA / "branch_m3_fold.csv"]
BOUNDARIES = sorted(DATA.glob("boundary_m10_*.csv"))

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _assert_png(path, min_bytes=10_000):
    data = Path(path).read_bytes()
    assert data[:8] == _PNG_MAGIC
    assert len(data) > min_bytes


# --- shipped data is structurally what the figures need --------------------


def test_shipped_b0_curve_monotone_rise():
    alpha, b0 = figio.read_curve(B0)
    assert len(alpha) == 201
    # b0 saturates to 1 within double precision for alpha near 1, so the
    # printed tail is flat; demand strict growth only before saturation
    assert np.all(np.diff(b0) >= 0)
    assert np.all(np.diff(b0[alpha < 0.9]) > 0)
    near = int(np.argmin(np.abs(alpha - 0.76)))
    assert b0[near] > 0.99
    assert b0[0] < 0.05
    assert b0[-1] == pytest.approx(1.0)


def test_shipped_doubly_branches_form_two_pairs():
    upper = figio.read_branch(DOUBLY[0])
    lower = figio.read_branch(DOUBLY[1])
    for branch in (upper, lower):
        assert set(branch.leads) == {"a1_1", "a2_1"}
    assert np.max(np.abs(upper.leads["a1_1"])) > 10 * np.max(np.abs(upper.leads["a2_1"]))
    assert np.max(np.abs(lower.leads["a2_1"])) > 10 * np.max(np.abs(lower.leads["a1_1"]))


def test_shipped_fold_branch_has_hook():
    ext = figio.read_branch(FOLD[1])
    assert ext.past_fold.any()
    fold_omega = ext.omega.min()
    assert ext.omega[ext.past_fold].max() > fold_omega + 0.01


def test_shipped_boundaries_cover_the_family():
    assert len(BOUNDARIES) == 5
    omegas = [figio.read_boundary(p).omega for p in BOUNDARIES]
    assert min(omegas) == pytest.approx(0.528)
    assert max(omegas) == pytest.approx(0.556)


# --- figure scripts --------------------------------------------------------


def test_b0_curve_renders(tmp_path):
    out = tmp_path / "b0.png"
    assert plot_b0_curve.main(["--in", str(B0), "--out", str(out)]) == 0
    _assert_png(out)


def test_bifurcation_renders_branch_pairs(tmp_path):
    out = tmp_path / "pairs.png"
    argv = ["--in", *map(str, DOUBLY), "--out", str(out)]
    assert plot_bifurcation.main(argv) == 0
    _assert_png(out)


def test_bifurcation_thickens_past_fold_rows(tmp_path):
    spec = figio.FigureSpec(
        inputs=tuple(FOLD), kind="bifurcation", out=tmp_path / "fold.png"
    )
    fig = plot_bifurcation.draw(spec)
    widths = {line.get_linewidth() for line in fig.axes[0].lines}
    assert plot_bifurcation.THICK in widths
    assert plot_bifurcation.THIN in widths


def test_boundaries_overlay_renders(tmp_path):
    out = tmp_path / "family.png"
    argv = ["--in", *map(str, BOUNDARIES), "--out", str(out)]
    assert plot_boundaries.main(argv) == 0
    _assert_png(out)


def test_normalize_flag_scales_to_unit_radius(tmp_path):
    spec = figio.FigureSpec(
        inputs=tuple(BOUNDARIES),
        kind="boundaries",
        out=tmp_path / "norm.png",
        normalize=True,
    )
    fig = plot_boundaries.draw(spec)
    radius = max(
        np.max(np.hypot(line.get_xdata(), line.get_ydata()))
        for line in fig.axes[0].lines
    )
    assert radius == pytest.approx(1.0, abs=1e-12)


def test_normalize_flag_changes_output(tmp_path):
    plain, norm = tmp_path / "plain.png", tmp_path / "norm.png"
    argv = ["--in", *map(str, BOUNDARIES)]
    assert plot_boundaries.main(argv + ["--out", str(plain)]) == 0
    assert plot_boundaries.main(argv + ["--out", str(norm), "--normalize"]) == 0
    assert plain.read_bytes() != norm.read_bytes()


def test_script_file_invocation(tmp_path):
    # the documented way to run the scripts: python <script> --in ... --out ...
    out = tmp_path / "cli.png"
    proc = subprocess.run(
        [sys.executable, "plot_b0_curve.py", "--in", str(B0), "--out", str(out)],
        cwd=DATA.parent,
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    _assert_png(out)


# --- error handling --------------------------------------------------------


def test_missing_input_exits_2(tmp_path, capsys):
    code = plot_b0_curve.main(
        ["--in", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "x.png")]
    )
    assert code == 2
    assert "missing input" in capsys.readouterr().err


def test_wrong_schema_exits_2(tmp_path, capsys):
    # a branch record is not a boundary dump, and vice versa
    code = plot_boundaries.main(
        ["--in", str(FOLD[1]), "--out", str(tmp_path / "x.png")]
    )
    assert code == 2
    assert "boundary dump" in capsys.readouterr().err
    code = plot_bifurcation.main(
        ["--in", str(BOUNDARIES[0]), "--out", str(tmp_path / "y.png")]
    )
    assert code == 2


def test_figure_spec_rejects_unknown_kind(tmp_path):
    with pytest.raises(figio.SchemaError):
        figio.FigureSpec(inputs=(B0,), kind="piechart", out=tmp_path / "x.png")


def test_read_curve_rejects_other_headers():
    with pytest.raises(figio.SchemaError):
        figio.read_curve(BOUNDARIES[0])


def test_normalized_helper_unit_scale():
    x = np.array([3.0, 0.0, -3.0])
    y = np.array([0.0, 4.0, 0.0])
    (nx, ny), = figio.normalized([(x, y)])
    assert np.max(np.hypot(nx, ny)) == pytest.approx(1.0)
