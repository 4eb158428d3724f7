"""Scalar and polynomial layer, checked against closed forms and scipy."""
from __future__ import annotations

import math
from fractions import Fraction

import pytest
import scipy.special as sps
from hypothesis import given, settings
from hypothesis import strategies as st

from holobreak.special_poly import (
    DomainError,
    PoleError,
    beta,
    complex_gamma,
    d_ell_weight,
    gegenbauer_a,
    gegenbauer_inflated,
    gegenbauer_norm_sq,
    gegenbauer_poly,
    jacobi_inflated,
    jacobi_norm_sq,
    jacobi_poly,
    jacobi_variant,
    pochhammer,
    poly_one,
    poly_two,
    reciprocal_gamma,
)

F = Fraction

rationals = st.fractions(
    min_value=F(-3), max_value=F(4), max_denominator=4
)


def rel(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


# --- scalars ---------------------------------------------------------------


def test_pochhammer_exact():
    assert pochhammer(F(1, 2), 3) == F(15, 8)
    assert isinstance(pochhammer(F(1, 2), 3), Fraction)
    assert pochhammer(7, 0) == 1
    assert pochhammer(-2, 4) == 0  # crosses zero


def test_pochhammer_rejects_bad_k():
    with pytest.raises(DomainError):
        pochhammer(1, -1)


def test_gamma_matches_math_on_reals():
    for x in (0.5, 1.0, 2.5, 7.3, 11.0):
        assert rel(complex_gamma(x), math.gamma(x)) < 1e-14


def test_gamma_reflection_negative_real():
    assert rel(complex_gamma(-0.5), math.gamma(-0.5)) < 1e-12
    assert rel(complex_gamma(-2.3), math.gamma(-2.3)) < 1e-12


def test_gamma_complex_against_scipy():
    for z in (1.5 + 2j, -2.3 + 1j, 0.3 - 0.7j, 4.0 + 0.01j):
        assert rel(complex_gamma(z), complex(sps.gamma(z))) < 1e-11


def test_gamma_poles():
    for z in (0, -3, -3.0, F(-3)):
        with pytest.raises(PoleError):
            complex_gamma(z)


@given(
    st.complex_numbers(
        min_magnitude=0.3, max_magnitude=6, allow_infinity=False, allow_nan=False
    )
)
@settings(max_examples=60)
def test_gamma_functional_equation(z):
    if abs(z.imag) < 1e-3 and z.real < 0.5:
        return  # too close to the pole line for a float identity check
    assert rel(z * complex_gamma(z), complex_gamma(z + 1)) < 1e-9


def test_reciprocal_gamma():
    assert reciprocal_gamma(-5) == 0.0
    assert reciprocal_gamma(0) == 0.0
    assert rel(reciprocal_gamma(4), 1 / 6) < 1e-14


def test_beta_values():
    assert rel(beta(2, 3), F(1, 12)) < 1e-14
    assert rel(beta(0.5, 0.5), math.pi) < 1e-13


def test_beta_pole_cancellation():
    # B(-2, 1) = lim Gamma(-2+e)/Gamma(-1+e) = -1/2, reached exactly
    assert beta(-2, 1) == F(-1, 2)


def test_beta_uncancelled_pole_raises():
    with pytest.raises(PoleError):
        beta(-1, 0.5)
    with pytest.raises(PoleError):
        beta(-1, -1)


# --- jacobi family ---------------------------------------------------------


def test_jacobi_low_degrees():
    assert jacobi_poly(0, F(1), F(2)).coefficients == (1,)
    p1 = jacobi_poly(1, F(1, 2), F(3, 2))
    # (alpha - beta)/2 + (alpha + beta + 2)/2 t
    assert p1.coefficients == (F(-1, 2), F(2))


def test_jacobi_is_legendre_at_zero_params():
    p3 = jacobi_poly(3, F(0), F(0))
    assert p3.coefficients == (F(0), F(-3, 2), F(0), F(5, 2))


@given(rationals, rationals, st.integers(min_value=0, max_value=6))
@settings(max_examples=40, deadline=None)
def test_jacobi_endpoint_values(alpha, beta_, ell):
    p = jacobi_poly(ell, alpha, beta_)
    assert p(F(1)) == pochhammer(alpha + 1, ell) / math.factorial(ell)
    assert p(F(-1)) == (-1) ** ell * pochhammer(beta_ + 1, ell) / math.factorial(ell)


def _falling(x, k):
    out = F(1)
    for i in range(k):
        out *= x - i
    return out


@given(rationals, rationals, st.integers(min_value=0, max_value=5))
@settings(max_examples=25, deadline=None)
def test_jacobi_rodrigues_oracle(alpha, beta_, ell):
    # Leibniz expansion of the ell-th derivative of (1-t)^(ell+a) (1+t)^(ell+b),
    # divided through by the weight; assembled independently of jacobi_poly.
    one_minus = poly_one([F(1), F(-1)])
    one_plus = poly_one([F(1), F(1)])
    acc = poly_one([F(0)])
    for k in range(ell + 1):
        coeff = (
            F(math.comb(ell, k))
            * (-1) ** k
            * _falling(ell + alpha, k)
            * _falling(ell + beta_, ell - k)
        )
        piece = poly_one([coeff])
        for _ in range(ell - k):
            piece = piece * one_minus
        for _ in range(k):
            piece = piece * one_plus
        acc = acc + piece
    oracle = acc * F((-1) ** ell, 2**ell * math.factorial(ell))
    assert jacobi_poly(ell, alpha, beta_) == oracle


@given(rationals, rationals, st.integers(min_value=0, max_value=6))
@settings(max_examples=40, deadline=None)
def test_jacobi_ode_residual_vanishes(alpha, beta_, ell):
    y = jacobi_poly(ell, alpha, beta_)
    t = poly_one([F(0), F(1)])
    one = poly_one([F(1)])
    lhs = (
        (one - t * t) * y.derivative().derivative()
        + poly_one([beta_ - alpha, -(alpha + beta_ + 2)]) * y.derivative()
        + ell * (ell + alpha + beta_ + 1) * y
    )
    assert lhs.is_zero()


def test_jacobi_against_scipy():
    p = jacobi_poly(5, F(3, 10), F(17, 10))
    for x in (-0.9, -0.3, 0.0, 0.4, 0.99):
        assert rel(p(x), sps.eval_jacobi(5, 0.3, 1.7, x)) < 1e-12


def test_jacobi_inflated_degree_one():
    alpha, beta_ = F(1, 3), F(5, 2)
    q = jacobi_inflated(1, alpha, beta_)
    assert q.coeff(1, 0) == beta_ + 1
    assert q.coeff(0, 1) == -(alpha + 1)


@given(rationals, rationals, st.integers(min_value=0, max_value=5))
@settings(max_examples=25, deadline=None)
def test_jacobi_inflated_homogeneous(alpha, beta_, ell):
    assert jacobi_inflated(ell, alpha, beta_).is_homogeneous(ell)


@given(rationals, rationals, st.integers(min_value=0, max_value=5))
@settings(max_examples=25, deadline=None)
def test_jacobi_inflated_recovers_polynomial(alpha, beta_, ell):
    q = jacobi_inflated(ell, alpha, beta_)
    p = jacobi_poly(ell, alpha, beta_)
    # on the section x + y = 1 the inflation is (+/-) the polynomial at 1-2x
    for x in (F(0), F(1, 3), F(1, 2), F(2, 3), F(7, 5), F(-1, 4)):
        assert q(x, 1 - x) == (-1) ** ell * p(1 - 2 * x)


@given(rationals, rationals, st.integers(min_value=0, max_value=5))
@settings(max_examples=25, deadline=None)
def test_variant_matches_inflated_by_parameter_flip(alpha, beta_, ell):
    flipped = jacobi_variant(ell, alpha, -alpha - beta_ - 2 * ell - 1)
    target = (-1) ** ell * jacobi_inflated(ell, alpha, beta_)
    assert flipped == target


# --- gegenbauer family -----------------------------------------------------


def test_gegenbauer_inflated_degree_two():
    alpha = F(3, 4)
    q = gegenbauer_inflated(2, alpha)
    assert q.coeff(0, 2) == 2 * alpha * (alpha + 1)
    assert q.coeff(1, 0) == -alpha


def test_gegenbauer_a_domain():
    with pytest.raises(DomainError):
        gegenbauer_a(3, 2, F(1))


@given(rationals.filter(lambda a: a > 0), st.integers(min_value=0, max_value=7))
@settings(max_examples=30, deadline=None)
def test_gegenbauer_value_at_one(alpha, ell):
    c = gegenbauer_poly(ell, alpha)
    assert c(F(1)) == pochhammer(2 * alpha, ell) / math.factorial(ell)


@given(rationals.filter(lambda a: a > -1), st.integers(min_value=0, max_value=6))
@settings(max_examples=30, deadline=None)
def test_gegenbauer_from_jacobi_bridge(alpha, ell):
    # C^(alpha+1/2) is the (alpha, alpha) Jacobi polynomial rescaled
    ratio = pochhammer(2 * alpha + 1, ell) / pochhammer(alpha + 1, ell)
    lhs = [ratio * c for c in jacobi_poly(ell, alpha, alpha).coefficients]
    rhs = gegenbauer_poly(ell, alpha + F(1, 2)).coefficients
    assert poly_one(lhs) == poly_one(rhs)


def test_gegenbauer_generating_function():
    alpha, t, r = 0.8, 0.3, 0.4
    total = sum(gegenbauer_poly(ell, alpha)(t) * r**ell for ell in range(48))
    assert rel(total, (1 - 2 * t * r + r * r) ** (-alpha)) < 1e-12


def test_gegenbauer_against_scipy():
    c = gegenbauer_poly(6, F(5, 4))
    for x in (-0.8, -0.1, 0.5, 0.95):
        assert rel(c(x), sps.eval_gegenbauer(6, 1.25, x)) < 1e-12


# --- closed-form norms -----------------------------------------------------


def test_jacobi_norm_legendre_case():
    for ell in range(6):
        assert rel(jacobi_norm_sq(ell, 0, 0), 2 / (2 * ell + 1)) < 1e-13


def test_jacobi_norm_chebyshev_edge():
    # alpha + beta = -1 hits the removable pole of the generic formula
    assert rel(jacobi_norm_sq(0, -0.5, -0.5), math.pi) < 1e-13


def test_weight_is_reciprocal_norm():
    for ell, a, b in [(0, 0.0, 0.0), (2, 0.5, 2.5), (4, -0.5, 1.0), (0, -0.5, -0.5)]:
        assert rel(d_ell_weight(ell, a, b) * jacobi_norm_sq(ell, a, b), 1.0) < 1e-12


def test_d_ell_weight_frozen_value():
    assert rel(d_ell_weight(0, 0, 0), 0.5) < 1e-14


def test_gegenbauer_norms():
    assert rel(gegenbauer_norm_sq(0, F(1, 2)), 2.0) < 1e-13
    assert rel(gegenbauer_norm_sq(0, 0), math.pi) < 1e-13
    assert gegenbauer_norm_sq(3, 0) == 0.0


def test_gegenbauer_norm_via_jacobi():
    for ell in range(5):
        alpha = 0.75
        ratio = float(
            pochhammer(2 * alpha + 1, ell) / pochhammer(alpha + 1, ell)
        )
        want = ratio**2 * jacobi_norm_sq(ell, alpha, alpha)
        assert rel(gegenbauer_norm_sq(ell, alpha + 0.5), want) < 1e-12


def test_norm_domain_errors():
    with pytest.raises(DomainError):
        jacobi_norm_sq(0, -1.5, 0)
    with pytest.raises(DomainError):
        jacobi_norm_sq(0, 1 + 1j, 0)
    with pytest.raises(DomainError):
        gegenbauer_norm_sq(2, -0.6)


# --- containers ------------------------------------------------------------


def test_poly_one_normalization_and_degree():
    p = poly_one([F(1), F(2), F(0), F(0)])
    assert p.coefficients == (F(1), F(2))
    assert p.degree == 1
    assert poly_one([0, 0]).is_zero()


def test_poly_two_items_sorted_and_zero_dropped():
    q = poly_two({(1, 0): F(2), (0, 1): F(0)})
    assert q.items() == (((1, 0), F(2)),)
    assert q.total_degrees() == [1]
