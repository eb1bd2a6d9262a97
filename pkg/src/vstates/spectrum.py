"""Dispersion-relation analysis for rotating patch equilibria.

Multiplier matrices of the linearized operator at the annulus, their
determinants and discriminants, the bifurcation angular velocities, the
symmetry threshold, and the critical inner radius b0.  Everything here
is closed-form on top of :mod:`vstates.specfun`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    DomainError,
    NegativeDiscriminantError,
    NotAnEigenvalueError,
)
from .specfun import lambda_n, theta_n


@dataclass(frozen=True)
class GsqgParams:
    """Problem parameters for one patch family."""

    alpha: float  # fractional order of the velocity kernel, in (0, 1)
    b: float | None = None  # inner mean radius; None means simply-connected
    m: int = 2  # fold symmetry of the sought V-states

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.b is not None and not 0.0 < self.b < 1.0:
            raise DomainError(f"inner radius must lie in (0, 1), got {self.b}")
        if self.m < 2 or self.m != int(self.m):
            raise DomainError(f"fold symmetry must be an integer >= 2, got {self.m}")

    def require_b(self) -> float:
        """Inner radius for doubly-connected formulas, or a domain error."""
        if self.b is None:
            raise DomainError("operation needs a doubly-connected parameter set (b)")
        return self.b


@dataclass(frozen=True)
class SpectralMatrix:
    """2x2 Fourier-multiplier block of the linearization at the annulus."""

    m11: float
    m12: float
    m21: float
    m22: float

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])


@dataclass(frozen=True)
class EigenPair:
    """Bifurcation angular velocities of one symmetry class."""

    omega_plus: float
    omega_minus: float
    delta: float  # discriminant of the dispersion relation
    simple: bool  # True when delta > 0, i.e. the two roots are distinct


def _kernel_terms(n: int, params: GsqgParams) -> tuple[float, float, float, float]:
    # (b, Lambda_1(b), Lambda_n(b), Theta_n) bundled for the matrix entries.
    b = params.require_b()
    return b, lambda_n(1, b, params.alpha), lambda_n(n, b, params.alpha), theta_n(
        n, params.alpha
    )


def multiplier_matrix(n: int, params: GsqgParams, omega: float) -> SpectralMatrix:
    """Fourier-multiplier matrix M_n at angular velocity omega.

    Parameters
    ----------
    n : int
        Mode index, n >= 2.
    params : GsqgParams
        Must carry an inner radius b.
    omega : float
        Angular velocity of the rotating frame.

    Returns
    -------
    SpectralMatrix
        Entries (omega - Theta_n + b^2 Lambda_1, -b^2 Lambda_n;
        b Lambda_n, b omega + b^(1-alpha) Theta_n - b Lambda_1).
    """
    if n < 2 or n != int(n):
        raise DomainError(f"mode index must be an integer >= 2, got {n}")
    b, lam1, lamn, thn = _kernel_terms(int(n), params)
    return SpectralMatrix(
        m11=omega - thn + b * b * lam1,
        m12=-b * b * lamn,
        m21=b * lamn,
        m22=b * omega + b ** (1.0 - params.alpha) * thn - b * lam1,
    )


def det_multiplier(n: int, params: GsqgParams, omega: float) -> float:
    """Determinant of the multiplier matrix M_n at omega.

    Its roots in omega are the bifurcation angular velocities of the
    n-fold symmetry class.
    """
    return multiplier_matrix(n, params, omega).det


def lambda_form_coefficients(n: int, params: GsqgParams) -> tuple[float, float]:
    """Coefficients (C_n, D_n) of the determinant in the variable l = 1 - 2 omega.

    The determinant factors as (b/4) (l^2 - 2 C_n l + D_n), so the
    spectral roots are l = C_n +- sqrt(C_n^2 - D_n).

    Parameters
    ----------
    n : int
        Mode index, n >= 2.
    params : GsqgParams
        Must carry an inner radius b.

    Returns
    -------
    (float, float)
        C_n and D_n.
    """
    if n < 2 or n != int(n):
        raise DomainError(f"mode index must be an integer >= 2, got {n}")
    b, lam1, lamn, thn = _kernel_terms(int(n), params)
    binv = b ** (-params.alpha)
    c_n = 1.0 + (binv - 1.0) * thn - (1.0 - b * b) * lam1
    d_n = (
        -4.0 * binv * thn * thn
        + 2.0 * (binv - 1.0 + 2.0 * (1.0 + b * b * binv) * lam1) * thn
        - 4.0 * b * b * (lam1 * lam1 - lamn * lamn)
        - 2.0 * (1.0 - b * b) * lam1
        + 1.0
    )
    return c_n, d_n


def discriminant(n: int, params: GsqgParams) -> float:
    """Reduced discriminant of the dispersion relation for mode n.

    Delta_n = [(b^-alpha + 1) Theta_n - (1 + b^2) Lambda_1]^2
              - 4 b^2 Lambda_n^2.
    Positive values give two distinct real angular velocities.

    Parameters
    ----------
    n : int
        Mode index, n >= 1 (n = 1 admits the degenerate closed value).
    params : GsqgParams
        Must carry an inner radius b.
    """
    if n < 1 or n != int(n):
        raise DomainError(f"mode index must be an integer >= 1, got {n}")
    b, lam1, lamn, thn = _kernel_terms(int(n), params)
    bracket = (b ** (-params.alpha) + 1.0) * thn - (1.0 + b * b) * lam1
    return bracket * bracket - 4.0 * b * b * lamn * lamn


def eigen_omegas(params: GsqgParams) -> EigenPair:
    """Both bifurcation angular velocities of the m-fold symmetry class.

    Parameters
    ----------
    params : GsqgParams
        Uses alpha, b, and the fold symmetry m.

    Returns
    -------
    EigenPair
        omega_plus >= omega_minus, both roots of det M_m = 0.

    Raises
    ------
    NegativeDiscriminantError
        If the discriminant is not strictly positive (m at or below the
        symmetry threshold).
    """
    m = params.m
    delta = discriminant(m, params)
    if delta <= 0.0:
        raise NegativeDiscriminantError(
            f"no real bifurcation pair for m={m}: discriminant {delta:.6g} <= 0"
        )
    b = params.require_b()
    base = 0.5 * (1.0 - b * b) * lambda_n(1, b, params.alpha) + 0.5 * (
        1.0 - b ** (-params.alpha)
    ) * theta_n(m, params.alpha)
    root = 0.5 * math.sqrt(delta)
    return EigenPair(
        omega_plus=base + root, omega_minus=base - root, delta=delta, simple=True
    )


def omega_simply(m: int, alpha: float) -> float:
    """Bifurcation angular velocity of the m-fold simply-connected family.

    Equals Theta_m: the gamma-ratio closed form
    [Gamma(1-alpha) / (2^(1-alpha) Gamma(1-alpha/2)^2)]
    * [Gamma(1+alpha/2)/Gamma(2-alpha/2) - Gamma(m+alpha/2)/Gamma(m+1-alpha/2)].
    """
    if m < 2 or m != int(m):
        raise DomainError(f"fold symmetry must be an integer >= 2, got {m}")
    return theta_n(int(m), alpha)


def symmetry_threshold(params: GsqgParams) -> int:
    """Smallest mode N whose dispersion relation has two real roots.

    Scans n = 2, 3, ... for the first n with
    (b^-alpha + 1) Theta_n >= (1 + b^2) Lambda_1(b) + 2 b Lambda_n(b);
    every n beyond the first hit satisfies it too, so the scan is exact.
    """
    b = params.require_b()
    alpha = params.alpha
    lam1 = lambda_n(1, b, alpha)
    scale = b ** (-alpha) + 1.0
    rhs_const = (1.0 + b * b) * lam1
    for n in range(2, 100000):
        if scale * theta_n(n, alpha) >= rhs_const + 2.0 * b * lambda_n(n, b, alpha):
            return n
    raise ConvergenceError(
        f"threshold scan exhausted for alpha={alpha}, b={b}"
    )


def b0_radius_equation(b: float, alpha: float) -> float:
    """Left-hand side of the critical-radius equation.

    g(b) = b^2 Lambda_1(b) - Lambda_1(1) + 1/2, strictly increasing in b
    with g(1) = 1/2 > 0; its unique root is b0(alpha).
    """
    return b * b * lambda_n(1, b, alpha) - lambda_n(1, 1.0, alpha) + 0.5


def b0_solve(alpha: float, tol: float = 1e-12) -> float:
    """Critical inner radius b0 by bisection.

    b0 is the unique root of ``b0_radius_equation``.  The tolerance
    bounds the bracket width, i.e. the uncertainty in b0 itself; a
    bound on the equation residual would mean nothing uniform, because
    the left-hand side steepens without limit as the root approaches 1
    (which happens quickly once alpha exceeds about 0.76).

    Parameters
    ----------
    alpha : float
        Fractional order in (0, 1).
    tol : float
        Bracket width at which bisection stops; floored at a few ulps.

    Returns
    -------
    float
        The root.
    """
    if tol <= 0.0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    lo, hi = 1e-9, 1.0
    if b0_radius_equation(lo, alpha) >= 0.0:
        # Root collapses onto the left bracket edge (alpha -> 0 regime).
        return lo
    width = max(tol, 4.0 * np.finfo(float).eps)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if b0_radius_equation(mid, alpha) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= width:
            break
    return 0.5 * (lo + hi)


def kernel_generator(params: GsqgParams, omega: float) -> np.ndarray:
    """Null vector of the multiplier matrix at a bifurcation velocity.

    Parameters
    ----------
    params : GsqgParams
        Uses alpha, b, m.
    omega : float
        One of the two roots of det M_m = 0.

    Returns
    -------
    numpy.ndarray
        (omega + b^-alpha Theta_m - Lambda_1(b), -Lambda_m(b)); the
        second component is strictly negative.

    Raises
    ------
    NotAnEigenvalueError
        If |det M_m(omega)| > 1e-8 (1 + |omega|).
    """
    m = params.m
    det = det_multiplier(m, params, omega)
    if abs(det) > 1e-8 * (1.0 + abs(omega)):
        raise NotAnEigenvalueError(
            f"omega={omega} is not a root of the m={m} dispersion relation "
            f"(|det|={abs(det):.3e})"
        )
    b = params.require_b()
    return np.array(
        [
            omega + b ** (-params.alpha) * theta_n(m, params.alpha)
            - lambda_n(1, b, params.alpha),
            -lambda_n(m, b, params.alpha),
        ]
    )


def limiting_omega_minus(b: float, alpha: float) -> float:
    """Large-m limit of the lower bifurcation velocities.

    Equals Lambda_1(b) - b^-alpha Lambda_1(1); strictly negative, which
    is why the high-symmetry lower branches all rotate clockwise.
    """
    return lambda_n(1, b, alpha) - b ** (-alpha) * lambda_n(1, 1.0, alpha)


def linearized_block(n: int, params: GsqgParams, omega: float) -> SpectralMatrix:
    """Exact Jacobian block of the V-state functional at the annulus.

    The directional derivative in the n-th coefficient pair is the
    multiplier matrix of mode n + 1 scaled by n + 1.

    Parameters
    ----------
    n : int
        Coefficient index, n >= 1.
    params : GsqgParams
        Must carry an inner radius b.
    omega : float
        Angular velocity.
    """
    if n < 1 or n != int(n):
        raise DomainError(f"coefficient index must be an integer >= 1, got {n}")
    inner = multiplier_matrix(int(n) + 1, params, omega)
    s = float(n + 1)
    return SpectralMatrix(
        m11=s * inner.m11, m12=s * inner.m12, m21=s * inner.m21, m22=s * inner.m22
    )
