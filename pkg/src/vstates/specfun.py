"""Special functions underlying the dispersion relations.

Gamma, Pochhammer, the Gauss hypergeometric function, Bessel J_n, the
kernel sequences Lambda_n(b) and Theta_n, and the five closed-form
annulus interaction integrals.  Each closed form that encodes nontrivial
analysis ships with a brute-force quadrature oracle (`*_oracle`) meant
for tests, not for production use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import jv as _jv
from scipy.special import roots_jacobi as _scipy_roots_jacobi

from .errors import DivergenceError, DomainError, PoleError, QuadratureError

_EPS = 2.220446049250313e-16

# Lanczos rational approximation, g = 7, nine coefficients.  Good for 13+
# significant digits of Gamma on the positive axis up to the float64
# overflow edge (~171.6).
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(x: float) -> float:
    """Gamma function on the real line with poles removed.

    Parameters
    ----------
    x : float
        Argument, not a non-positive integer.

    Returns
    -------
    float
        Gamma(x).  Satisfies ``gamma(x + 1) == x * gamma(x)`` to near
        machine precision.
    """
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"gamma pole at x={x}")
    if x < 0.5:
        # Lift into the Lanczos sweet spot through the recurrence.
        return gamma(x + 1.0) / x
    y = x - 1.0
    series = _LANCZOS_COEFFS[0]
    for k in range(1, len(_LANCZOS_COEFFS)):
        series += _LANCZOS_COEFFS[k] / (y + k)
    t = y + _LANCZOS_G + 0.5
    # Split the power so the intermediate stays below float64 overflow
    # even when the final value is close to it (x near 171).
    half = t ** (0.5 * (y + 0.5)) * math.exp(-0.5 * t)
    return math.sqrt(2.0 * math.pi) * half * half * series


def pochhammer(x: float, n: int) -> float:
    """Rising factorial (x)_n = x (x+1) ... (x+n-1), with (x)_0 = 1."""
    if n < 0 or n != int(n):
        raise DomainError(f"pochhammer order must be a non-negative integer, got {n}")
    out = 1.0
    for k in range(int(n)):
        out *= x + k
    return out


def _poch_over_factorial(x: float, n: int) -> float:
    # (x)_n / n! as a product of ratios; stays bounded for x in (0, 2].
    out = 1.0
    for k in range(n):
        out *= (x + k) / (1.0 + k)
    return out


def _hyp_series(a: float, b: float, c: float, z: float) -> float:
    term = 1.0
    total = 1.0
    for k in range(100000):
        term *= (a + k) * (b + k) * z / ((c + k) * (1.0 + k))
        total += term
        if abs(term) <= _EPS * abs(total):
            return total
    raise QuadratureError(
        f"hypergeometric series did not converge for ({a},{b};{c};{z})"
    )


@lru_cache(maxsize=256)
def _jacobi_rule(alpha_exp: float, beta_exp: float, order: int):
    # scipy warns about a masked division when alpha_exp + beta_exp hits
    # -1 exactly (the k=1 branch of its weight recurrence); the discarded
    # branch is the offender, so the values are fine.
    with np.errstate(invalid="ignore", divide="ignore"):
        nodes, weights = _scipy_roots_jacobi(order, alpha_exp, beta_exp)
    return nodes, weights


def _hyp_euler(a: float, b: float, c: float, z: float) -> float:
    # Integral representation with the endpoint weights folded into a
    # Gauss-Jacobi rule; requires c > b > 0.
    #
    # The rule converges geometrically in the order, but the computed
    # nodes and weights lose accuracy as the order grows (badly so when
    # an exponent sits near -1), so escalating "to be safe" makes the
    # answer worse.  Start low, accept on tight pairwise agreement, and
    # if no pair agrees return the lower-order member of the closest
    # pair: that one carries the least node rounding.
    pref = gamma(c) / (gamma(b) * gamma(c - b)) * 2.0 ** (1.0 - c)
    prev = None
    val = math.nan
    best_val = None
    best_diff = math.inf
    for order in (12, 24, 48, 96, 192, 384, 768):
        nodes, weights = _jacobi_rule(c - b - 1.0, b - 1.0, order)
        x = 0.5 * (1.0 + nodes)
        val = pref * float(np.dot(weights, (1.0 - z * x) ** (-a)))
        if prev is not None:
            diff = abs(val - prev)
            if diff <= 1e-12 * max(1.0, abs(val)):
                return val
            if diff < best_diff:
                best_diff = diff
                best_val = prev
        prev = val
    return val if best_val is None else best_val


def _recip_gamma(x: float) -> float:
    # 1/Gamma with its zeros at the non-positive integers kept exact, so
    # the connection prefactors vanish cleanly in the polynomial cases.
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    return 1.0 / gamma(x)


def _hyp_near_unit(a: float, b: float, c: float, z: float) -> float:
    # Connection formula at z = 1: two series in powers of 1 - z.
    # Requires c - a - b away from the integers.
    s = c - a - b
    u = 1.0 - z
    first = (
        gamma(c) * gamma(s) * _recip_gamma(c - a) * _recip_gamma(c - b)
        * _hyp_series(a, b, 1.0 - s, u)
    )
    second = (
        gamma(c) * gamma(-s) * _recip_gamma(a) * _recip_gamma(b)
        * u**s
        * _hyp_series(c - a, c - b, 1.0 + s, u)
    )
    return first + second


def hyp2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric function F(a, b; c; z) for z in [0, 1].

    Parameters
    ----------
    a, b, c : float
        Parameters; c must not be a non-positive integer.
    z : float
        Argument in [0, 1].  z = 1 requires c - a - b > 0.

    Returns
    -------
    float
        F(a, b; c; z).

    Notes
    -----
    The power series is used for z <= 1/2.  Near the unit argument the
    connection formula re-expands in powers of 1 - z, which keeps full
    accuracy where the direct series stalls.  In between, the Euler
    integral representation is evaluated with an adaptive Gauss-Jacobi
    rule that absorbs the endpoint weights x^(b-1) (1-x)^(c-b-1); the
    roles of a and b are swapped when needed to satisfy c > b > 0, with
    the series as a fallback when neither ordering qualifies or when
    the gamma prefactor would overflow.
    """
    if c <= 0.0 and c == math.floor(c):
        raise PoleError(f"hypergeometric parameter pole at c={c}")
    if z < 0.0 or z > 1.0:
        raise DomainError(f"hypergeometric argument out of range: z={z}")
    if z == 0.0:
        return 1.0
    if z == 1.0:
        if c - a - b <= 0.0:
            raise DivergenceError(
                f"F({a},{b};{c};1) diverges: c-a-b={c - a - b} <= 0"
            )
        return gamma(c) * gamma(c - a - b) * _recip_gamma(c - a) * _recip_gamma(c - b)
    if z <= 0.5:
        return _hyp_series(a, b, c, z)
    s = c - a - b
    if (
        z >= 0.85
        and abs(s - round(s)) > 1e-6
        and max(abs(c), abs(c - a), abs(c - b), abs(a), abs(b)) < 170.0
    ):
        return _hyp_near_unit(a, b, c, z)
    if c < 170.0:
        if c > b > 0.0:
            return _hyp_euler(a, b, c, z)
        if c > a > 0.0:
            return _hyp_euler(b, a, c, z)
    return _hyp_series(a, b, c, z)


def bessel_j(n: int, x: float) -> float:
    """Bessel function of the first kind by its defining power series.

    Accurate for moderate arguments (alternating-series cancellation
    grows like e^x * eps, so keep x below roughly 25).

    Parameters
    ----------
    n : int
        Non-negative order.
    x : float
        Non-negative argument.

    Returns
    -------
    float
        J_n(x).
    """
    if n < 0 or n != int(n):
        raise DomainError(f"bessel order must be a non-negative integer, got {n}")
    if x < 0.0:
        raise DomainError(f"bessel argument must be non-negative, got {x}")
    n = int(n)
    half = 0.5 * x
    term = half**n / math.factorial(n)
    total = term
    for k in range(500):
        term *= -(half * half) / ((k + 1.0) * (n + k + 1.0))
        total += term
        if abs(term) <= _EPS * max(abs(total), 1e-300):
            break
    return total


def c_alpha(alpha: float) -> float:
    """Normalization constant of the fractional Biot-Savart kernel."""
    _check_alpha(alpha)
    return gamma(alpha / 2.0) / (2.0 ** (1.0 - alpha) * gamma(1.0 - alpha / 2.0))


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")


def lambda_n(n: int, b: float, alpha: float) -> float:
    """Interaction kernel coefficient Lambda_n(b).

    Parameters
    ----------
    n : int
        Mode index, n >= 1.
    b : float
        Radius ratio in (0, 1].
    alpha : float
        Fractional order in (0, 1).

    Returns
    -------
    float
        Lambda_n(b) = C_alpha * (alpha/2)_n / n! * b^(n-1)
        * F(alpha/2, n + alpha/2; n + 1; b^2), strictly positive.
    """
    if n < 1 or n != int(n):
        raise DomainError(f"lambda_n index must be a positive integer, got {n}")
    if not 0.0 < b <= 1.0:
        raise DomainError(f"lambda_n radius must lie in (0, 1], got {b}")
    _check_alpha(alpha)
    n = int(n)
    h = 0.5 * alpha
    return (
        c_alpha(alpha)
        * _poch_over_factorial(h, n)
        * b ** (n - 1)
        * hyp2f1(h, n + h, n + 1.0, b * b)
    )


def theta_n(n: int, alpha: float) -> float:
    """Self-interaction coefficient Theta_n = Lambda_1(1) - Lambda_n(1).

    Evaluated in closed form through gamma-function ratios; the ratio
    Gamma(n + alpha/2) / Gamma(n + 1 - alpha/2) is built by recurrence so
    large n never overflows.

    Parameters
    ----------
    n : int
        Mode index, n >= 1.
    alpha : float
        Fractional order in (0, 1).

    Returns
    -------
    float
        Theta_n, with Theta_1 = 0 exactly; non-negative and increasing
        in n.
    """
    if n < 1 or n != int(n):
        raise DomainError(f"theta_n index must be a positive integer, got {n}")
    _check_alpha(alpha)
    n = int(n)
    h = 0.5 * alpha
    pref = gamma(1.0 - alpha) / (2.0 ** (1.0 - alpha) * gamma(1.0 - h) ** 2)
    ratio_1 = gamma(1.0 + h) / gamma(2.0 - h)
    ratio_n = ratio_1
    for k in range(1, n):
        ratio_n *= (k + h) / (k + 1.0 - h)
    return pref * (ratio_1 - ratio_n)


def theta_n_alpha0(n: int) -> float:
    """alpha -> 0 limit of Theta_n."""
    return (n - 1.0) / (2.0 * n)


def lambda_n_alpha0(n: int, b: float) -> float:
    """alpha -> 0 limit of Lambda_n(b)."""
    return b ** (n - 1) / (2.0 * n)


def theta_n_alpha1(n: int) -> float:
    """alpha -> 1 limit of Theta_n."""
    return (2.0 / math.pi) * sum(1.0 / (2 * k + 1) for k in range(1, n))


def lambda_n_alpha1(n: int, b: float) -> float:
    """alpha -> 1 limit of Lambda_n(b)."""
    return (
        _poch_over_factorial(0.5, n)
        * b ** (n - 1)
        * hyp2f1(0.5, n + 0.5, n + 1.0, b * b)
    )


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls for the semi-infinite oscillatory oracle integral."""

    upper_cutoff: float = 4000.0  # truncation point T
    panels: int = 2048  # Gauss-Legendre panels on [0, T]
    rel_tol: float = 1e-4  # allowed mismatch of successive tail averages

    def __post_init__(self) -> None:
        if self.upper_cutoff <= 0.0:
            raise DomainError("upper_cutoff must be positive")
        if self.panels < 16:
            raise DomainError("panels must be at least 16")
        if not 0.0 < self.rel_tol < 1.0:
            raise DomainError("rel_tol must lie in (0, 1)")


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _cumulative_integral(func, breakpoints, base_width):
    """Integrate func over consecutive [p_i, p_{i+1}] segments.

    Each segment is split into panels of width <= base_width and handled
    with a 16-point Gauss-Legendre rule; returns the cumulative value at
    every breakpoint.
    """
    edges_parts = []
    start = breakpoints[0]
    edges_parts.append(np.array([start]))
    for left, right in zip(breakpoints[:-1], breakpoints[1:]):
        count = max(1, int(math.ceil((right - left) / base_width)))
        edges_parts.append(np.linspace(left, right, count + 1)[1:])
    edges = np.concatenate(edges_parts)
    mids = 0.5 * (edges[1:] + edges[:-1])
    scales = 0.5 * (edges[1:] - edges[:-1])
    points = mids[:, None] + scales[:, None] * _GL_NODES[None, :]
    values = func(points.ravel()).reshape(points.shape)
    panel_sums = scales * (values @ _GL_WEIGHTS)
    cumulative = np.concatenate([[0.0], np.cumsum(panel_sums)])
    idx = np.searchsorted(edges, np.asarray(breakpoints))
    return cumulative[idx]


def lambda_quadrature_oracle(
    n: int, b: float, alpha: float, spec: QuadratureSpec | None = None
) -> float:
    """Brute-force value of Lambda_n(b) from its Bessel integral.

    Evaluates (1/b) * integral_0^inf J_n(bt) J_n(t) t^(alpha-1) dt by
    panelwise Gauss-Legendre up to ``spec.upper_cutoff`` and damps the
    oscillatory tail with nested half-period averaging: four passes at
    the fast half-period pi/(1+b), then four passes at the slow
    half-period pi/(1-b).  Each pass kills one order of the matching
    tail component, which is what makes the tiny large-n, small-b
    values resolvable.  Test oracle only; the closed form is the
    production path.

    Parameters
    ----------
    n : int
        Mode index, n >= 1.
    b : float
        Radius ratio, strictly inside (0, 1) so the integral converges.
    alpha : float
        Fractional order in (0, 1).
    spec : QuadratureSpec, optional
        Truncation and resolution controls.

    Returns
    -------
    float
        The averaged truncated integral divided by b.

    Raises
    ------
    QuadratureError
        If the last two tail averages disagree by more than
        ``spec.rel_tol`` in relative terms.
    """
    if n < 1 or n != int(n):
        raise DomainError(f"oracle index must be a positive integer, got {n}")
    if not 0.0 < b < 1.0:
        raise DomainError(f"oracle radius must lie strictly in (0, 1), got {b}")
    _check_alpha(alpha)
    if spec is None:
        spec = QuadratureSpec()
    n = int(n)

    def integrand(t):
        return _jv(n, b * t) * _jv(n, t) * t ** (alpha - 1.0)

    cutoff = spec.upper_cutoff
    fast = math.pi / (1.0 + b)
    slow = math.pi / (1.0 - b)
    passes = 4
    points = sorted(
        {
            cutoff + i * fast + j * slow
            for i in range(passes + 1)
            for j in range(passes + 1)
        }
    )
    breakpoints = [0.0] + points
    cumulative = _cumulative_integral(integrand, breakpoints, cutoff / spec.panels)
    value_at = dict(zip(breakpoints, cumulative))

    def _reduce(vals):
        while len(vals) > 1:
            vals = [0.5 * (u + v) for u, v in zip(vals[:-1], vals[1:])]
        return vals[0]

    # Average out the fast tail component at each slow offset, then
    # reduce across the slow offsets, keeping the next-to-last stage as
    # the error estimate.
    stages = [
        _reduce([value_at[cutoff + i * fast + j * slow] for i in range(passes + 1)])
        for j in range(passes + 1)
    ]
    penultimate = None
    while len(stages) > 1:
        penultimate = stages[0]
        stages = [0.5 * (u + v) for u, v in zip(stages[:-1], stages[1:])]
    result = stages[0]
    if penultimate is not None:
        scale = max(abs(result), 1e-300)
        if abs(result - penultimate) > spec.rel_tol * scale:
            raise QuadratureError(
                "tail averages did not settle: "
                f"{penultimate!r} vs {result!r} (rel_tol={spec.rel_tol})"
            )
    return result / b


_ANNULUS_MIN_INDEX = {"I": 1, "J": 0, "K": 1, "L": 0, "M": 0}


def annulus_integral_closed(
    kind: str, n: int, b: float, alpha: float, a: float = 0.0, c: float = 0.0
) -> complex:
    """Closed-form Fourier coefficient of an annulus interaction integral.

    The five kinds are the circular-boundary contour integrals whose
    values reduce to single hypergeometric terms; each returns the
    coefficient of the relevant power of w (w^n, w^(n+2), or conj(w)^n).

    Parameters
    ----------
    kind : str
        One of "I", "J", "K", "L", "M".
    n : int
        Mode index; "I" and "K" need n >= 1, the others n >= 0.
    b : float
        Radius ratio in (0, 1).
    alpha : float
        Fractional order in (0, 1).
    a, c : float
        Linear weights of the two boundary contributions ("I" ignores
        them).

    Returns
    -------
    complex
        The coefficient (real-valued, returned as complex for symmetry
        with the quadrature oracle).
    """
    kind = kind.upper()
    if kind not in _ANNULUS_MIN_INDEX:
        raise DomainError(f"unknown integral kind {kind!r}")
    if n < _ANNULUS_MIN_INDEX[kind] or n != int(n):
        raise DomainError(f"kind {kind} needs integer n >= {_ANNULUS_MIN_INDEX[kind]}")
    if not 0.0 < b < 1.0:
        raise DomainError(f"radius ratio must lie in (0, 1), got {b}")
    _check_alpha(alpha)
    n = int(n)
    h = 0.5 * alpha
    z = b * b
    if kind == "I":
        val = b**n * _poch_over_factorial(h, n) * hyp2f1(h, n + h, n + 1.0, z)
    elif kind == "J":
        val = b * (
            a * (1.0 + h) * hyp2f1(h, 2.0 + h, 2.0, z)
            - c
            * b**n
            * _poch_over_factorial(1.0 + h, n + 1)
            * hyp2f1(h, n + 2.0 + h, n + 2.0, z)
        )
    elif kind == "K":
        val = a * b * h * hyp2f1(h + 1.0, h + 1.0, 2.0, z) - c * b ** (
            n - 1
        ) * _poch_over_factorial(1.0 + h, n - 1) * hyp2f1(h, n + h, float(n), z)
    elif kind == "L":
        val = -(b * b) * (
            a * 0.5 * h * (1.0 + h) * hyp2f1(1.0 + h, 2.0 + h, 3.0, z)
            - c
            * b**n
            * _poch_over_factorial(h, n + 2)
            * hyp2f1(1.0 + h, n + 2.0 + h, n + 3.0, z)
        )
    else:  # M
        val = -(
            a * hyp2f1(h, h + 1.0, 1.0, z)
            - c * b**n * _poch_over_factorial(h, n) * hyp2f1(h + 1.0, n + h, n + 1.0, z)
        )
    return complex(val)


def annulus_integral_oracle(
    kind: str,
    n: int,
    b: float,
    alpha: float,
    a: float = 0.0,
    c: float = 0.0,
    nodes: int = 4096,
) -> complex:
    """Trapezoidal mean-value evaluation of an annulus integral at w = 1.

    Direct quadrature of the defining contour integral over the unit
    circle; converges spectrally for b < 1.  Test oracle only.

    Parameters
    ----------
    kind, n, b, alpha, a, c
        As in :func:`annulus_integral_closed`.
    nodes : int
        Number of equispaced quadrature nodes, at least 512.

    Returns
    -------
    complex
        The contour integral value; for the normalizations used here
        this equals the closed-form coefficient.
    """
    kind = kind.upper()
    if kind not in _ANNULUS_MIN_INDEX:
        raise DomainError(f"unknown integral kind {kind!r}")
    if nodes < 512:
        raise DomainError(f"need at least 512 nodes, got {nodes}")
    if n < _ANNULUS_MIN_INDEX[kind] or n != int(n):
        raise DomainError(f"kind {kind} needs integer n >= {_ANNULUS_MIN_INDEX[kind]}")
    if not 0.0 < b < 1.0:
        raise DomainError(f"radius ratio must lie in (0, 1), got {b}")
    _check_alpha(alpha)
    n = int(n)
    phi = 2.0 * math.pi * np.arange(nodes) / nodes
    tau = np.exp(1j * phi)
    if kind == "I":
        f = tau ** (n - 1) / np.abs(1.0 - b * tau) ** alpha
    elif kind == "J":
        f = (1.0 - b * tau) * (a - c * tau**n) / np.abs(1.0 - b * tau) ** (alpha + 2.0)
    elif kind == "K":
        f = (
            (1.0 - b * np.conj(tau))
            * (a - c * np.conj(tau) ** n)
            / np.abs(1.0 - b * tau) ** (alpha + 2.0)
        )
    elif kind == "L":
        f = (b - tau) * (a - c * tau**n) / np.abs(b - tau) ** (alpha + 2.0)
    else:  # M
        f = (
            (b - np.conj(tau))
            * (a - c * np.conj(tau) ** n)
            / np.abs(b - tau) ** (alpha + 2.0)
        )
    return complex(np.mean(f * tau))
