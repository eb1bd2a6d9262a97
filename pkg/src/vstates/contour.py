"""Boundary curves and the discretized rotating-patch residual.

A patch boundary is a cosine-perturbed circle sampled on a uniform
grid.  The equilibrium condition is evaluated at every node by
desingularized trapezoidal quadrature and projected onto the sine
modes that the Newton solver drives to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GeometryError
from .specfun import c_alpha

# Nodes closer than this (adjacent along one boundary, or across the
# two boundaries of an annular patch) mean the curve has effectively
# pinched; Newton can wander into such states and they must be
# rejected, not integrated.
_MIN_NODE_GAP = 1e-8


@dataclass(frozen=True)
class Discretization:
    """Uniform m-fold grid: N = m 2^r nodes resolve M = 2^(r-1) - 1 modes."""

    r: int  # resolution exponent
    m: int  # fold symmetry of the states sampled on this grid

    def __post_init__(self) -> None:
        if self.r != int(self.r) or self.r < 2:
            raise DomainError(
                f"resolution exponent must be an integer >= 2, got {self.r}"
            )
        if self.m != int(self.m) or self.m < 1:
            raise DomainError(
                f"fold symmetry must be a positive integer, got {self.m}"
            )

    @property
    def n_nodes(self) -> int:
        return self.m * 2**self.r

    @property
    def n_modes(self) -> int:
        return 2 ** (self.r - 1) - 1

    def grid(self) -> np.ndarray:
        """Node angles theta_i = 2 pi i / N."""
        return 2.0 * np.pi * np.arange(self.n_nodes) / self.n_nodes


@dataclass(frozen=True, eq=False)
class SimplyState:
    """One boundary z(theta) = e^(i theta) (radius + sum a_k cos(m k theta))."""

    alpha: float  # fractional order of the active scalar
    m: int  # fold symmetry
    omega: float  # angular velocity of the co-rotating frame
    coeffs: np.ndarray  # cosine amplitudes a_1..a_M
    radius: float = 1.0  # mean radius, held fixed during solves

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.m != int(self.m) or self.m < 1:
            raise DomainError(f"fold symmetry must be a positive integer, got {self.m}")
        if not self.radius > 0.0:
            raise DomainError(f"mean radius must be positive, got {self.radius}")
        object.__setattr__(
            self, "coeffs", np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        )


@dataclass(frozen=True, eq=False)
class DoublyState:
    """Outer/inner boundary pair with mean radii 1 and b."""

    alpha: float  # fractional order of the active scalar
    b: float  # mean inner radius
    m: int  # fold symmetry
    omega: float  # angular velocity of the co-rotating frame
    outer: np.ndarray  # cosine amplitudes of the outer boundary
    inner: np.ndarray  # cosine amplitudes of the inner boundary

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0.0 < self.b < 1.0:
            raise DomainError(f"inner radius must lie in (0, 1), got {self.b}")
        if self.m != int(self.m) or self.m < 1:
            raise DomainError(f"fold symmetry must be a positive integer, got {self.m}")
        outer = np.atleast_1d(np.asarray(self.outer, dtype=float))
        inner = np.atleast_1d(np.asarray(self.inner, dtype=float))
        if outer.shape != inner.shape:
            raise DomainError(
                f"boundary coefficient vectors differ in length: "
                f"{outer.size} vs {inner.size}"
            )
        object.__setattr__(self, "outer", outer)
        object.__setattr__(self, "inner", inner)


@dataclass(frozen=True, eq=False)
class ResidualVector:
    """Sine coefficients b_1..b_M of the equilibrium defect."""

    sines: np.ndarray

    @property
    def max_abs(self) -> float:
        """Max-norm, the Newton stopping functional."""
        if self.sines.size == 0:
            return 0.0
        return float(np.max(np.abs(self.sines)))


def _cosine_boundary(base, coeffs, m, theta):
    # z = e^(i theta) rho(theta) with rho = base + sum_k a_k cos(m k theta);
    # returns (z, z_theta, rho) so callers can test rho > 0.
    theta = np.asarray(theta, dtype=float)
    k = np.arange(1, coeffs.size + 1)
    phase = np.multiply.outer(m * k, theta)
    rho = base + coeffs @ np.cos(phase)
    drho = -(coeffs * m * k) @ np.sin(phase)
    ring = np.exp(1j * theta)
    return ring * rho, ring * (1j * rho + drho), rho


def boundary_eval(state, theta):
    """Boundary point(s) and tangential derivative(s) at angle theta.

    Parameters
    ----------
    state : SimplyState or DoublyState
        Boundary description.
    theta : float or array_like
        Evaluation angle(s).

    Returns
    -------
    tuple
        ``(z, z_theta)`` for a single boundary; for a doubly-connected
        state, ``((z1, z1_theta), (z2, z2_theta))`` with the outer
        boundary first.
    """
    if isinstance(state, SimplyState):
        z, zt, _ = _cosine_boundary(state.radius, state.coeffs, state.m, theta)
        return z, zt
    if isinstance(state, DoublyState):
        z1, zt1, _ = _cosine_boundary(1.0, state.outer, state.m, theta)
        z2, zt2, _ = _cosine_boundary(state.b, state.inner, state.m, theta)
        return (z1, zt1), (z2, zt2)
    raise DomainError(f"unsupported state type {type(state).__name__}")


def _check_curve(z, rho, label):
    if np.min(rho) <= 0.0:
        raise GeometryError(
            f"{label} radial factor vanishes (min {np.min(rho):.3e})"
        )
    gaps = np.abs(z - np.roll(z, -1))
    if np.min(gaps) < _MIN_NODE_GAP:
        raise GeometryError(
            f"{label} adjacent nodes collapse (min gap {np.min(gaps):.3e})"
        )


def _self_interaction(z, zt, alpha, label):
    # Desingularized trapezoid: the j = i term is the (zero) limit of the
    # subtracted integrand, realized here as inf**-alpha = 0.
    dist = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(dist, np.inf)
    if np.min(dist) < _MIN_NODE_GAP:
        raise GeometryError(
            f"{label} nodes coincide (min distance {np.min(dist):.3e})"
        )
    kern = dist**-alpha
    return (kern @ zt - zt * kern.sum(axis=1)) / z.size


def _require_match(state, disc, *vectors):
    if state.m != disc.m:
        raise DomainError(
            f"state fold {state.m} does not match discretization fold {disc.m}"
        )
    for vec in vectors:
        if vec.size != disc.n_modes:
            raise DomainError(
                f"coefficient vector length {vec.size} does not match "
                f"mode count {disc.n_modes}"
            )


def residual_samples_simply(state, disc):
    """Equilibrium defect at every grid node, before sine projection.

    Parameters
    ----------
    state : SimplyState
        Boundary and rotation speed.
    disc : Discretization
        Grid; its fold must match the state.

    Returns
    -------
    numpy.ndarray
        Real defect values at the N nodes.

    Raises
    ------
    GeometryError
        If the curve is degenerate on the grid (vanishing radial
        factor, collapsing or coinciding nodes).
    """
    _require_match(state, disc, state.coeffs)
    z, zt, rho = _cosine_boundary(state.radius, state.coeffs, state.m, disc.grid())
    _check_curve(z, rho, "boundary")
    s = _self_interaction(z, zt, state.alpha, "boundary")
    vals = np.real((state.omega * z + 1j * c_alpha(state.alpha) * s) * np.conj(zt))
    if not np.all(np.isfinite(vals)):
        raise GeometryError("residual overflow on a degenerate boundary")
    return vals


def residual_simply(state, disc):
    """Sine-mode residual of a simply-connected state.

    Parameters
    ----------
    state : SimplyState
        Boundary and rotation speed.
    disc : Discretization
        Grid; its fold must match the state.

    Returns
    -------
    ResidualVector
        Coefficients of sin(m k theta), k = 1..M.
    """
    return sine_project(residual_samples_simply(state, disc), disc.m, disc.n_modes)


def residual_samples_doubly(state, disc):
    """Equilibrium defect of both boundaries at every grid node.

    Parameters
    ----------
    state : DoublyState
        Boundary pair and rotation speed.
    disc : Discretization
        Grid; its fold must match the state.

    Returns
    -------
    tuple of numpy.ndarray
        Defect values on the outer and inner boundary nodes.

    Raises
    ------
    GeometryError
        If either curve is degenerate or the two boundaries (nearly)
        intersect on the grid.
    """
    _require_match(state, disc, state.outer, state.inner)
    theta = disc.grid()
    z1, zt1, rho1 = _cosine_boundary(1.0, state.outer, state.m, theta)
    z2, zt2, rho2 = _cosine_boundary(state.b, state.inner, state.m, theta)
    _check_curve(z1, rho1, "outer boundary")
    _check_curve(z2, rho2, "inner boundary")
    cross = np.abs(z1[:, None] - z2[None, :])
    if np.min(cross) < _MIN_NODE_GAP:
        raise GeometryError(
            f"boundaries intersect on the grid (min gap {np.min(cross):.3e})"
        )
    alpha = state.alpha
    s1 = _self_interaction(z1, zt1, alpha, "outer boundary")
    s2 = _self_interaction(z2, zt2, alpha, "inner boundary")
    n = theta.size
    t21 = cross**-alpha @ zt2 / n  # inner sources felt on the outer boundary
    t12 = cross.T**-alpha @ zt1 / n  # outer sources felt on the inner boundary
    c = c_alpha(alpha)
    f1 = state.omega * np.real(z1 * np.conj(zt1)) + c * np.imag(
        (t21 - s1) * np.conj(zt1)
    )
    f2 = state.omega * np.real(z2 * np.conj(zt2)) + c * np.imag(
        (s2 - t12) * np.conj(zt2)
    )
    if not (np.all(np.isfinite(f1)) and np.all(np.isfinite(f2))):
        raise GeometryError("residual overflow on a degenerate boundary")
    return f1, f2


def residual_doubly(state, disc):
    """Sine-mode residual pair of a doubly-connected state.

    Parameters
    ----------
    state : DoublyState
        Boundary pair and rotation speed.
    disc : Discretization
        Grid; its fold must match the state.

    Returns
    -------
    tuple of ResidualVector
        Outer and inner sine coefficient vectors.
    """
    f1, f2 = residual_samples_doubly(state, disc)
    return (
        sine_project(f1, disc.m, disc.n_modes),
        sine_project(f2, disc.m, disc.n_modes),
    )


def sine_project(samples, m, n_modes):
    """Coefficients of sin(m k theta), k = 1..n_modes, from grid samples.

    Exact for band-limited input below the grid Nyquist frequency.

    Parameters
    ----------
    samples : array_like
        Real values on the uniform angle grid.
    m : int
        Fold symmetry; only frequencies m, 2m, ... are extracted.
    n_modes : int
        Number of sine coefficients to return.

    Returns
    -------
    ResidualVector
        The coefficients b_1..b_{n_modes}.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 1:
        raise DomainError("samples must form a one-dimensional grid vector")
    if n_modes < 0:
        raise DomainError(f"mode count must be non-negative, got {n_modes}")
    if n_modes == 0:
        return ResidualVector(np.zeros(0))
    idx = m * np.arange(1, n_modes + 1)
    if idx[-1] > samples.size // 2:
        raise DomainError(
            f"grid of {samples.size} samples cannot resolve sine mode {idx[-1]}"
        )
    spectrum = np.fft.rfft(samples)
    return ResidualVector(-2.0 / samples.size * spectrum[idx].imag)


def min_boundary_gap(state, disc):
    """Smallest node-to-node distance between the two boundaries.

    Parameters
    ----------
    state : DoublyState
        Boundary pair.
    disc : Discretization
        Grid on which both boundaries are sampled.

    Returns
    -------
    float
        min over nodes of |z1(theta_i) - z2(theta_j)|.
    """
    theta = disc.grid()
    z1 = _cosine_boundary(1.0, state.outer, state.m, theta)[0]
    z2 = _cosine_boundary(state.b, state.inner, state.m, theta)[0]
    return float(np.min(np.abs(z1[:, None] - z2[None, :])))
