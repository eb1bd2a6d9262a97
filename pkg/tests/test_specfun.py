"""Special-function layer: frozen references, identities, brute-force oracles."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings, strategies as st

from vstates import specfun as sf
from vstates.errors import DivergenceError, DomainError, PoleError, QuadratureError

# Reference values computed independently with mpmath at 30 digits and
# frozen here.
GAMMA_REFS = [
    (0.5, 1.772453850905516),
    (1.0, 1.0),
    (4.7, 15.431411600047436),
    (9.25, 69106.22689508938),
    (-1.5, 2.363271801207355),
    (-6.3, -0.0030542314729989006),
    (0.225, 4.05295825446133),
    (170.5, 5.56209241456e305),
]

HYP2F1_REFS = [
    ((0.25, 1.25, 2.0, 0.3), 1.0549945296558356),
    ((0.45, 4.45, 5.0, 0.9801), 3.353625896752857),
    ((0.45, 4.45, 5.0, 0.81), 1.8373539826336536),
    ((0.25, 8.25, 9.0, 0.64), 1.2502971129210039),
    ((0.45, 0.95, 1.0, 0.36), 1.2094925215007137),
    ((0.25, 0.5, 2.0, 1.0), 1.1128357888987643),
    ((0.9, 2.0, 1.5, 0.7), 4.519774006530828),
    ((2.6, 2.9, 1.2, 0.6), 114.9773503131721),
    ((0.45, 1.45, 3.0, 0.99), 1.5219533042940252),
    ((0.05, 1.05, 2.0, 0.9975), 1.0561608775470928),
]

C_ALPHA_REFS = [
    (0.1, 10.115591468552555),
    (0.5, 2.0920992401062035),
    (0.9, 1.1362592772927742),
]

LAMBDA_REFS = [
    ((1, 0.5, 0.5), 0.5462919848606216),
    ((2, 0.2, 0.9), 0.07525886797719138),
    ((4, 0.65, 0.5), 0.06122257678880074),
    ((1, 1.0, 0.5), 0.8231298900893586),
    ((3, 0.9, 0.1), 0.15482309977925024),
    ((6, 0.8, 0.7), 0.08014596194034536),
]

THETA_REFS = [
    ((2, 0.5), 0.23517996859695958),
    ((4, 0.9), 0.42842788129061005),
    ((4, 0.5), 0.40621994575838477),
    ((10, 0.5), 0.5592388805683614),
    ((3, 0.1), 0.33466572402424694),
    ((8, 0.7), 0.575588399084385),
]

BESSEL_REFS = [
    ((0, 0.5), 0.9384698072408129),
    ((1, 2.0), 0.5767248077568734),
    ((3, 7.5), -0.2580609131934603),
    ((5, 14.0), 0.2203776482919637),
]


def _scaled_residual(*terms):
    scale = max(1.0, max(abs(t) for t in terms))
    return abs(sum(terms)) / scale


# ---------------------------------------------------------------------------
# gamma / pochhammer


def test_gamma_matches_references():
    for x, ref in GAMMA_REFS:
        assert sf.gamma(x) == pytest.approx(ref, rel=5e-13)


def test_gamma_half_integer_and_factorial():
    assert sf.gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    for n in range(1, 12):
        assert sf.gamma(n + 1) == pytest.approx(math.factorial(n), rel=1e-13)


def test_gamma_poles_raise():
    for x in (0.0, -1.0, -7.0):
        with pytest.raises(PoleError):
            sf.gamma(x)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.01, max_value=80.0))
def test_gamma_recurrence(x):
    assert sf.gamma(x + 1.0) == pytest.approx(x * sf.gamma(x), rel=1e-12)


def test_pochhammer_values_and_split():
    assert sf.pochhammer(1.7, 0) == 1.0
    assert sf.pochhammer(3.0, 4) == pytest.approx(3 * 4 * 5 * 6)
    # (x)_{m+n} = (x)_m (x+m)_n
    x, m, n = 0.35, 3, 5
    assert sf.pochhammer(x, m + n) == pytest.approx(
        sf.pochhammer(x, m) * sf.pochhammer(x + m, n), rel=1e-13
    )
    with pytest.raises(DomainError):
        sf.pochhammer(1.0, -2)


# ---------------------------------------------------------------------------
# hypergeometric function


def test_hyp2f1_matches_references():
    for (a, b, c, z), ref in HYP2F1_REFS:
        assert sf.hyp2f1(a, b, c, z) == pytest.approx(ref, rel=5e-13)


def test_hyp2f1_domain_errors():
    with pytest.raises(DomainError):
        sf.hyp2f1(0.5, 0.5, 2.0, -0.1)
    with pytest.raises(DomainError):
        sf.hyp2f1(0.5, 0.5, 2.0, 1.0001)
    with pytest.raises(PoleError):
        sf.hyp2f1(0.5, 0.5, 0.0, 0.3)
    with pytest.raises(PoleError):
        sf.hyp2f1(0.5, 0.5, -3.0, 0.3)
    # At z = 1 the series only sums when c - a - b > 0.
    with pytest.raises(DivergenceError):
        sf.hyp2f1(0.5, 1.5, 2.0, 1.0)
    with pytest.raises(DivergenceError):
        sf.hyp2f1(1.5, 1.5, 2.0, 1.0)


def test_hyp2f1_unit_argument_consistent_with_interior():
    # The z = 1 value is a gamma-ratio shortcut; approach it along z < 1
    # (Euler integral route) and check continuity.
    a, b, c = 0.25, 0.5, 3.0
    limit = sf.hyp2f1(a, b, c, 1.0)
    near = sf.hyp2f1(a, b, c, 1.0 - 1e-7)
    assert near == pytest.approx(limit, rel=1e-5)


_CONTIG_GRID = [
    (a, b, c, z)
    for a in (0.25, 1.3)
    for b in (0.45, 2.1)
    for c in (1.5, 3.2)
    for z in (0.0, 0.3, 0.75, 0.95)
]


@pytest.mark.parametrize("a,b,c,z", _CONTIG_GRID)
def test_contiguous_shift_in_c(a, b, c, z):
    # c(c+1)[F(c) - F(c+1)] = a b z F(a+1, b+1; c+2)
    r = _scaled_residual(
        c * (c + 1) * sf.hyp2f1(a, b, c, z),
        -c * (c + 1) * sf.hyp2f1(a, b, c + 1, z),
        -a * b * z * sf.hyp2f1(a + 1, b + 1, c + 2, z),
    )
    assert r < 1e-10


@pytest.mark.parametrize("a,b,c,z", _CONTIG_GRID)
def test_contiguous_raise_first_parameter(a, b, c, z):
    # c[F - F(a+1)] + b z F(a+1, b+1; c+1) = 0
    r = _scaled_residual(
        c * sf.hyp2f1(a, b, c, z),
        -c * sf.hyp2f1(a + 1, b, c, z),
        b * z * sf.hyp2f1(a + 1, b + 1, c + 1, z),
    )
    assert r < 1e-10


@pytest.mark.parametrize("a,b,c,z", _CONTIG_GRID)
def test_contiguous_raise_second_parameter(a, b, c, z):
    # c[F - F(b+1)] + a z F(a+1, b+1; c+1) = 0
    r = _scaled_residual(
        c * sf.hyp2f1(a, b, c, z),
        -c * sf.hyp2f1(a, b + 1, c, z),
        a * z * sf.hyp2f1(a + 1, b + 1, c + 1, z),
    )
    assert r < 1e-10


@pytest.mark.parametrize("a,b,c,z", _CONTIG_GRID)
def test_contiguous_split_over_c(a, b, c, z):
    # cF = (c-b) F(c+1) + b F(b+1, c+1), and the same with a and b swapped
    r1 = _scaled_residual(
        c * sf.hyp2f1(a, b, c, z),
        -(c - b) * sf.hyp2f1(a, b, c + 1, z),
        -b * sf.hyp2f1(a, b + 1, c + 1, z),
    )
    r2 = _scaled_residual(
        c * sf.hyp2f1(a, b, c, z),
        -(c - a) * sf.hyp2f1(a, b, c + 1, z),
        -a * sf.hyp2f1(a + 1, b, c + 1, z),
    )
    assert r1 < 1e-10 and r2 < 1e-10


@pytest.mark.parametrize("a,b,c,z", _CONTIG_GRID)
def test_contiguous_parameter_exchange(a, b, c, z):
    # b F(b+1) - a F(a+1) + (a-b) F = 0
    r = _scaled_residual(
        b * sf.hyp2f1(a, b + 1, c, z),
        -a * sf.hyp2f1(a + 1, b, c, z),
        (a - b) * sf.hyp2f1(a, b, c, z),
    )
    assert r < 1e-10


@pytest.mark.parametrize("a,b,c,z", _CONTIG_GRID)
def test_contiguous_lower_parameters(a, b, c, z):
    # (b-a)(1-z) F - (c-a) F(a-1) + (c-b) F(b-1) = 0
    r = _scaled_residual(
        (b - a) * (1.0 - z) * sf.hyp2f1(a, b, c, z),
        -(c - a) * sf.hyp2f1(a - 1, b, c, z),
        (c - b) * sf.hyp2f1(a, b - 1, c, z),
    )
    assert r < 1e-10


@settings(max_examples=60, deadline=None)
@given(
    st.floats(min_value=0.05, max_value=3.0),
    st.floats(min_value=0.05, max_value=3.0),
    st.floats(min_value=0.6, max_value=5.0),
    st.floats(min_value=0.0, max_value=0.95),
)
def test_contiguous_relations_random(a, b, c, z):
    r1 = _scaled_residual(
        c * sf.hyp2f1(a, b, c, z),
        -c * sf.hyp2f1(a + 1, b, c, z),
        b * z * sf.hyp2f1(a + 1, b + 1, c + 1, z),
    )
    r2 = _scaled_residual(
        c * (c + 1) * sf.hyp2f1(a, b, c, z),
        -c * (c + 1) * sf.hyp2f1(a, b, c + 1, z),
        -a * b * z * sf.hyp2f1(a + 1, b + 1, c + 2, z),
    )
    assert r1 < 1e-10 and r2 < 1e-10


@pytest.mark.parametrize("a,b", [(0.45, 1.2), (0.25, 2.5)])
@pytest.mark.parametrize("z", [0.1, 0.4, 0.8])
def test_quadratic_argument_transform(a, b, z):
    # F(a, b; 2b; 4z/(1+z)^2) = (1+z)^(2a) F(a, a+1/2-b; b+1/2; z^2)
    lhs = sf.hyp2f1(a, b, 2.0 * b, 4.0 * z / (1.0 + z) ** 2)
    rhs = (1.0 + z) ** (2.0 * a) * sf.hyp2f1(a, a + 0.5 - b, b + 0.5, z * z)
    assert lhs == pytest.approx(rhs, rel=1e-11)


# ---------------------------------------------------------------------------
# Bessel


def test_bessel_matches_references():
    for (n, x), ref in BESSEL_REFS:
        assert sf.bessel_j(n, x) == pytest.approx(ref, rel=1e-11, abs=1e-13)


def test_bessel_large_argument_degrades_gracefully():
    # Alternating-series cancellation costs about e^x * eps in absolute
    # terms, so x = 20 is only good to ~1e-7.
    assert sf.bessel_j(2, 20.0) == pytest.approx(-0.16034135192299814, abs=5e-7)


def test_bessel_three_term_recurrence():
    # J_{n-1}(x) + J_{n+1}(x) = (2n/x) J_n(x)
    for n in (1, 2, 5):
        for x in (0.7, 3.3, 11.0):
            lhs = sf.bessel_j(n - 1, x) + sf.bessel_j(n + 1, x)
            assert lhs == pytest.approx(2.0 * n / x * sf.bessel_j(n, x), rel=1e-9, abs=1e-12)


def test_bessel_domain_errors():
    with pytest.raises(DomainError):
        sf.bessel_j(-1, 1.0)
    with pytest.raises(DomainError):
        sf.bessel_j(2, -0.5)


# ---------------------------------------------------------------------------
# kernel sequences


def test_kernel_constant_matches_references():
    for alpha, ref in C_ALPHA_REFS:
        assert sf.c_alpha(alpha) == pytest.approx(ref, rel=1e-13)
    for alpha in (0.0, 1.0, -0.2, 1.3):
        with pytest.raises(DomainError):
            sf.c_alpha(alpha)


def test_lambda_matches_references():
    for (n, b, alpha), ref in LAMBDA_REFS:
        assert sf.lambda_n(n, b, alpha) == pytest.approx(ref, rel=1e-12)


def test_theta_matches_references():
    for (n, alpha), ref in THETA_REFS:
        assert sf.theta_n(n, alpha) == pytest.approx(ref, rel=1e-12)


def test_theta_first_mode_is_exactly_zero():
    for alpha in (0.1, 0.5, 0.9):
        assert sf.theta_n(1, alpha) == 0.0


def test_theta_equals_lambda_difference_at_unit_radius():
    # Two routes: gamma-ratio closed form vs the b = 1 hypergeometric
    # values summed at unit argument.
    for n in (2, 4, 7):
        for alpha in (0.3, 0.5, 0.9):
            diff = sf.lambda_n(1, 1.0, alpha) - sf.lambda_n(n, 1.0, alpha)
            assert sf.theta_n(n, alpha) == pytest.approx(diff, rel=1e-12)


def test_lambda_domain_errors():
    with pytest.raises(DomainError):
        sf.lambda_n(0, 0.5, 0.5)
    with pytest.raises(DomainError):
        sf.lambda_n(2, 0.0, 0.5)
    with pytest.raises(DomainError):
        sf.lambda_n(2, 1.1, 0.5)
    with pytest.raises(DomainError):
        sf.lambda_n(2, 0.5, 1.0)


def test_lambda_monotone_in_radius_and_mode():
    for alpha in (0.1, 0.5, 0.9):
        for n in (1, 2, 5):
            vals = [sf.lambda_n(n, b, alpha) for b in (0.1, 0.3, 0.5, 0.7, 0.9)]
            assert all(v > 0.0 for v in vals)
            assert vals == sorted(vals)
        for b in (0.2, 0.6, 0.9):
            by_mode = [sf.lambda_n(n, b, alpha) for n in range(1, 9)]
            assert by_mode == sorted(by_mode, reverse=True)


def test_theta_monotone_and_bounded():
    for alpha in (0.1, 0.5, 0.9):
        limit = sf.lambda_n(1, 1.0, alpha)
        vals = [sf.theta_n(n, alpha) for n in range(1, 13)]
        assert vals == sorted(vals)
        assert all(0.0 <= v < limit for v in vals)
        # The gap to the large-n limit keeps shrinking.
        gaps = [limit - sf.theta_n(n, alpha) for n in (10, 40, 160)]
        assert gaps[0] > gaps[1] > gaps[2] > 0.0


def test_lambda_small_radius_power_law():
    # Lambda_n(b) ~ C_alpha (alpha/2)_n / n! b^(n-1) as b -> 0.
    b = 1e-3
    for n in (1, 3, 6):
        for alpha in (0.3, 0.7):
            h = 0.5 * alpha
            lead = sf.c_alpha(alpha) * sf.pochhammer(h, n) / math.factorial(n)
            assert sf.lambda_n(n, b, alpha) / b ** (n - 1) == pytest.approx(
                lead, rel=1e-5
            )


def test_small_alpha_limits():
    for n in (1, 2, 4, 7):
        assert sf.theta_n(n, 1e-6) == pytest.approx(
            sf.theta_n_alpha0(n), abs=1e-4
        )
        for b in (0.2, 0.6, 0.9):
            assert sf.lambda_n(n, b, 1e-6) == pytest.approx(
                sf.lambda_n_alpha0(n, b), rel=1e-4, abs=1e-4
            )


def test_alpha_near_one_limits():
    for n in (1, 2, 4, 7):
        assert sf.theta_n(n, 1.0 - 1e-6) == pytest.approx(
            sf.theta_n_alpha1(n), abs=1e-4
        )
        for b in (0.2, 0.6, 0.9):
            assert sf.lambda_n(n, b, 1.0 - 1e-6) == pytest.approx(
                sf.lambda_n_alpha1(n, b), rel=1e-4, abs=1e-4
            )


# ---------------------------------------------------------------------------
# semi-infinite Bessel-product oracle


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        sf.QuadratureSpec(upper_cutoff=-1.0)
    with pytest.raises(DomainError):
        sf.QuadratureSpec(panels=4)
    with pytest.raises(DomainError):
        sf.QuadratureSpec(rel_tol=1.5)


def test_lambda_oracle_single_case():
    closed = sf.lambda_n(2, 0.6, 0.5)
    oracle = sf.lambda_quadrature_oracle(2, 0.6, 0.5)
    assert oracle == pytest.approx(closed, rel=1e-6)


def test_lambda_closed_form_matches_oracle_grid():
    for n in range(1, 9):
        for b in (0.1, 0.3, 0.6, 0.9):
            for alpha in (0.1, 0.5, 0.9):
                closed = sf.lambda_n(n, b, alpha)
                oracle = sf.lambda_quadrature_oracle(n, b, alpha)
                assert oracle == pytest.approx(closed, rel=1e-6), (n, b, alpha)


def test_lambda_oracle_near_degenerate_radius():
    # b close to 1 stretches the slow oscillation period; the tail
    # averaging still settles, just less sharply.
    closed = sf.lambda_n(1, 0.99, 0.5)
    oracle = sf.lambda_quadrature_oracle(1, 0.99, 0.5)
    assert oracle == pytest.approx(closed, rel=1e-4)


def test_lambda_oracle_domain_and_failure():
    with pytest.raises(DomainError):
        sf.lambda_quadrature_oracle(0, 0.5, 0.5)
    with pytest.raises(DomainError):
        sf.lambda_quadrature_oracle(2, 1.0, 0.5)
    with pytest.raises(QuadratureError):
        # An impossible tolerance must be reported, not silently missed.
        sf.lambda_quadrature_oracle(
            8, 0.1, 0.9, sf.QuadratureSpec(rel_tol=1e-15)
        )


# ---------------------------------------------------------------------------
# annulus interaction integrals


_ANNULUS_GRID = [
    (kind, n, b, alpha, a, c)
    for kind in "IJKLM"
    for n in (1, 2, 3, 6)
    for b in (0.2, 0.5, 0.8)
    for alpha in (0.3, 0.7)
    for (a, c) in ((1.0, 0.0), (0.0, 1.0), (1.3, -0.7))
]


def test_annulus_closed_matches_oracle_grid():
    for kind, n, b, alpha, a, c in _ANNULUS_GRID:
        closed = sf.annulus_integral_closed(kind, n, b, alpha, a, c)
        oracle = sf.annulus_integral_oracle(kind, n, b, alpha, a, c, nodes=4096)
        scale = max(abs(closed), 1e-12)
        assert abs(oracle - closed) / scale < 1e-8, (kind, n, b, alpha, a, c)


def test_annulus_low_index_cases():
    # The kinds that admit n = 0 agree with the oracle there too.
    for kind in ("J", "L", "M"):
        closed = sf.annulus_integral_closed(kind, 0, 0.4, 0.6, 0.8, -1.1)
        oracle = sf.annulus_integral_oracle(kind, 0, 0.4, 0.6, 0.8, -1.1)
        assert abs(oracle - closed) / max(abs(closed), 1e-12) < 1e-8


def test_annulus_equal_weights_cancellation():
    # With a = c and n = 0 the two terms of kind J share one
    # hypergeometric factor, so the value collapses to zero.
    closed = sf.annulus_integral_closed("J", 0, 0.3, 0.5, 1.0, 1.0)
    oracle = sf.annulus_integral_oracle("J", 0, 0.3, 0.5, 1.0, 1.0)
    assert closed == 0.0
    assert abs(oracle) < 1e-10


def test_annulus_values_are_real():
    for kind in "IJKLM":
        n = max(1, sf._ANNULUS_MIN_INDEX[kind])
        val = sf.annulus_integral_oracle(kind, n, 0.35, 0.45, 0.9, 0.4)
        assert abs(val.imag) < 1e-12


def test_annulus_domain_errors():
    with pytest.raises(DomainError):
        sf.annulus_integral_closed("Q", 1, 0.5, 0.5)
    with pytest.raises(DomainError):
        sf.annulus_integral_closed("I", 0, 0.5, 0.5)
    with pytest.raises(DomainError):
        sf.annulus_integral_closed("K", 0, 0.5, 0.5)
    with pytest.raises(DomainError):
        sf.annulus_integral_closed("J", 1, 1.5, 0.5)
    with pytest.raises(DomainError):
        sf.annulus_integral_oracle("I", 1, 0.5, 0.5, nodes=100)
