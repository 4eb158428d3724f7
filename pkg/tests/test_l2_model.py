"""Half-line model: coordinates, lift, transform pair, inversion, norms."""

import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holobreak.l2_model import (
    L2Fn,
    fourier_laplace,
    halfplane_norm_sq,
    i_power,
    invert_rchat,
    iota,
    iota_inv,
    l2fn,
    phi_apply,
    rchat_apply,
    weight_M,
    weighted_inner,
    weighted_norm_sq,
)
from holobreak.quadrature import integrate_region
from holobreak.rc_transform import RCParams, b_const, c_ell
from holobreak.special_poly import DomainError, jacobi_poly


def rel(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


def ktype_fn(lam3):
    return l2fn(lambda z: z ** (lam3 - 1) * math.exp(-z), lam3)


Z_SAMPLES = (0.5, 1.0, 2.3, 5.0)
V_SAMPLES = (-0.9, -0.3, 0.0, 0.4, 0.8)
XY_SAMPLES = ((0.5, 0.5), (1.0, 2.0), (3.2, 0.7), (0.1, 4.0))


def test_i_power_cycle():
    assert i_power(0) == 1
    assert i_power(1) == 1j
    assert i_power(2) == -1
    assert i_power(3) == -1j
    assert i_power(4) == 1
    assert i_power(-1) == -1j
    assert i_power(-2) == -1


def test_l2fn_basics():
    f = l2fn(lambda z: z * z, 2.0)
    assert isinstance(f, L2Fn)
    assert f.arity == 1
    assert f.weights == (2.0,)
    assert f(3.0) == 9.0
    g = l2fn(lambda x, y: x + y, 2, 3)
    assert g.arity == 2
    assert g(1.0, 2.0) == 3.0
    with pytest.raises(DomainError):
        l2fn(lambda z: z)
    with pytest.raises(DomainError):
        l2fn(lambda z: z, 1, 2, 3)


def test_iota_values():
    assert iota(2, 0) == (1.0, 1.0)
    x, y = iota(3, 0.5)
    assert rel(x, 0.75) < 1e-15 and rel(y, 2.25) < 1e-15
    for bad in (0.0, -1.0):
        with pytest.raises(DomainError):
            iota(bad, 0.0)
    for bad in (-1.0, 1.0, 2.0):
        with pytest.raises(DomainError):
            iota(1.0, bad)
    with pytest.raises(DomainError):
        iota_inv(0.0, 1.0)
    with pytest.raises(DomainError):
        iota_inv(1.0, -2.0)


def test_iota_round_trip_grid():
    for z in Z_SAMPLES:
        for v in V_SAMPLES:
            zz, vv = iota_inv(*iota(z, v))
            assert rel(zz, z) < 1e-14 and rel(vv, v) < 1e-14
    for x, y in XY_SAMPLES:
        xx, yy = iota(*iota_inv(x, y))
        assert rel(xx, x) < 1e-14 and rel(yy, y) < 1e-14


@given(
    st.floats(min_value=0.1, max_value=50.0),
    st.floats(min_value=-0.99, max_value=0.99),
)
@settings(max_examples=60, deadline=None)
def test_iota_round_trip_property(z, v):
    zz, vv = iota_inv(*iota(z, v))
    assert rel(zz, z) < 1e-12 and abs(vv - v) < 1e-12


def test_measure_identity_pointwise():
    # the density x^(1-l1) y^(1-l2) dx dy, rewritten through iota with
    # Jacobian z/2, factors as M^2 times the one-variable density in z and
    # the Jacobi weight in v, up to the fixed power of two below
    for lam1, lam2, ell in ((2, 2, 1), (2.5, 3, 2), (1.5, 1.75, 0), (4, 2, 3)):
        p = RCParams(lam1, lam2, ell)
        a, b = float(p.alpha), float(p.beta)
        for z in Z_SAMPLES:
            for v in V_SAMPLES:
                x, y = iota(z, v)
                lhs = x ** (1 - lam1) * y ** (1 - lam2) * (z / 2)
                m = weight_M(p, z, v)
                rhs = (
                    m * m
                    * 2.0 ** (-a - b - 1)
                    * (1 - v) ** a
                    * (1 + v) ** b
                    * z ** (1 - float(p.lam3))
                )
                assert rel(lhs, rhs) < 1e-12


def test_weight_m_values_and_boundaries():
    p = RCParams(2, 2, 0)
    assert rel(weight_M(p, 2.0, 0.0), 4.0 * 2.0) < 1e-15
    for v in (1.0, -1.0):
        with pytest.raises(DomainError):
            weight_M(p, 1.0, v)
    with pytest.raises(DomainError):
        weight_M(p, 0.0, 0.0)
    with pytest.raises(DomainError):
        weight_M(p, 1.0, 1.5)
    # negative alpha: the factor vanishes at v=1 instead of blowing up
    q = RCParams(0.5, 2, 0)
    assert weight_M(q, 1.0, 1.0) == 0.0
    with pytest.raises(DomainError):
        weight_M(q, 1.0, -1.0)
    # zero exponents never hit the boundary guard
    r = RCParams(1, 1, 0)
    assert rel(weight_M(r, 3.0, 1.0), 3.0) < 1e-15
    assert rel(weight_M(r, 3.0, -1.0), 3.0) < 1e-15


def test_phi_ell_zero_form():
    p = RCParams(2.5, 3, 0)
    lifted = phi_apply(p, lambda z: math.exp(-z))
    assert lifted.weights == (2.5, 3)
    for x, y in XY_SAMPLES:
        expected = x**1.5 * y**2.0 * (x + y) ** -4.5 * math.exp(-(x + y))
        assert rel(lifted(x, y), expected) < 1e-13


def test_phi_ktype_image():
    # lifting z^(lam3-1) e^-z produces the product of the two one-variable
    # ground states decorated by the degree-ell layer
    for lam1, lam2, ell in ((2, 2, 3), (2.5, 3, 2), (4, 2, 1)):
        p = RCParams(lam1, lam2, ell)
        poly = jacobi_poly(ell, p.alpha, p.beta)
        lifted = phi_apply(p, ktype_fn(float(p.lam3)))
        for x, y in XY_SAMPLES:
            expected = (
                x ** (lam1 - 1) * math.exp(-x)
                * y ** (lam2 - 1) * math.exp(-y)
                * (x + y) ** ell
                * float(poly((y - x) / (x + y)))
            )
            assert rel(lifted(x, y), expected) < 1e-12


def test_phi_declared_weight_check():
    p = RCParams(2, 2, 1)
    with pytest.raises(DomainError):
        phi_apply(p, l2fn(lambda z: math.exp(-z), 3.0))
    ok = phi_apply(p, l2fn(lambda z: math.exp(-z), p.lam3))
    assert ok.arity == 2


def test_phi_iota_coordinate_identity():
    for lam1, lam2, ell in ((2, 2.5, 2), (1.5, 1.75, 1), (4, 2, 3)):
        p = RCParams(lam1, lam2, ell)
        poly = jacobi_poly(ell, p.alpha, p.beta)
        h = lambda z: (1 + z) * math.exp(-z)
        lifted = phi_apply(p, h)
        for z in Z_SAMPLES:
            for v in V_SAMPLES:
                lhs = lifted(*iota(z, v))
                rhs = float(poly(v)) * h(z) / weight_M(p, z, v)
                assert rel(lhs, rhs) < 1e-12


def test_rchat_of_phi_is_scaled_identity():
    for lam1, lam2, ell in ((2, 2, 0), (2, 2, 2), (2.5, 3, 1), (2.5, 3, 4), (4, 2, 3)):
        p = RCParams(lam1, lam2, ell)
        h = ktype_fn(float(p.lam3))
        lifted = phi_apply(p, h)
        c = float(c_ell(lam1, lam2, ell))
        for z in (0.7, 1.3, 2.6):
            got = rchat_apply(p, lifted, z, method="jacobi")
            want = i_power(-ell) * c * h(z)
            assert abs(got - want) / max(1.0, abs(want)) < 1e-9


def test_rchat_methods_agree_on_integer_weights():
    for lam1, lam2, ell in ((2, 2, 2), (4, 2, 1)):
        p = RCParams(lam1, lam2, ell)
        lifted = phi_apply(p, ktype_fn(float(p.lam3)))
        for z in (0.9, 2.1):
            a = rchat_apply(p, lifted, z, method="legendre")
            b = rchat_apply(p, lifted, z, method="jacobi")
            assert abs(a - b) / max(1.0, abs(b)) < 1e-9


def test_rchat_ell_zero_hand_integral():
    # level zero collapses to the plain average over the segment
    for lam1, lam2 in ((1.5, 1.75), (2, 2)):
        p = RCParams(lam1, lam2, 0)
        F = l2fn(lambda x, y: math.exp(-x - y), lam1, lam2)
        for z in (0.5, 1.0, 3.0):
            got = rchat_apply(p, F, z)
            assert abs(got - z * math.exp(-z)) < 1e-10


def test_rchat_vanishes_off_segment():
    p = RCParams(2, 2, 1)

    def far(x, y):
        s = x + y
        return math.exp(-((s - 10.0) ** 2)) if s > 10.0 else 0.0

    assert rchat_apply(p, far, 2.0) == 0


def test_rchat_errors():
    p = RCParams(2, 2, 1)
    F = phi_apply(p, ktype_fn(float(p.lam3)))
    with pytest.raises(DomainError):
        rchat_apply(p, F, 0.0)
    with pytest.raises(DomainError):
        rchat_apply(p, F, 1.0, method="simpson")

    def jump(x, y):
        # discontinuous across the segment, so estimates never settle
        return 1.0 if (y - x) / (x + y) > 0.1234 else 0.0

    with pytest.raises(DomainError):
        rchat_apply(p, jump, 2.0)


def test_invert_single_component_round_trip():
    p = RCParams(2, 2.5, 2)
    h = ktype_fn(float(p.lam3))
    lifted = phi_apply(p, h)
    G = l2fn(lambda z: rchat_apply(p, lifted, z, method="jacobi"), float(p.lam3))
    rebuilt = invert_rchat(2, 2.5, {2: G})
    for x, y in XY_SAMPLES:
        assert abs(rebuilt(x, y) - lifted(x, y)) / max(1.0, abs(lifted(x, y))) < 1e-8


def test_invert_zero_components():
    rebuilt = invert_rchat(2, 2, {0: lambda z: 0.0, 3: lambda z: 0.0})
    assert rebuilt(1.2, 0.7) == 0
    assert rebuilt.weights == (2, 2)


def test_invert_truncation_drops_high_levels():
    h0 = lambda z: math.exp(-z)
    h3 = lambda z: z * math.exp(-z)
    full = invert_rchat(2, 2, {0: h0, 3: h3})
    cut = invert_rchat(2, 2, {0: h0, 3: h3}, L=1)
    p0 = RCParams(2, 2, 0)
    only0 = phi_apply(p0, h0)
    for x, y in XY_SAMPLES:
        assert abs(cut(x, y) - only0(x, y) / float(c_ell(2, 2, 0))) < 1e-12
    # x = y sits on a zero of the odd-degree layer, so probe off-diagonal
    assert abs(full(1.0, 2.0) - cut(1.0, 2.0)) > 0


def test_invert_residual_monotone():
    # F(x, y) = e^(-x-y) is constant along each segment x + y = z, so its
    # level-ell transform factors as kappa * z^(ell+1) e^(-z); one transform
    # evaluation per level pins kappa.  The residual norm is integrated in
    # slanted coordinates, where the rule folds the endpoint weights exactly.
    lam1, lam2 = 1.5, 1.75
    F = l2fn(lambda x, y: math.exp(-x - y), lam1, lam2)
    comps = {}
    for ell in range(9):
        p = RCParams(lam1, lam2, ell)
        kappa = rchat_apply(p, F, 1.0) * math.e

        def g(z, k=kappa, e=ell):
            return k * z ** (e + 1) * math.exp(-z)

        comps[ell] = g
    p0 = RCParams(lam1, lam2, 0)
    a, b = float(p0.alpha), float(p0.beta)

    def residual(L):
        trunc = invert_rchat(lam1, lam2, comps, L=L)

        def density(z, v):
            x, y = iota(z, v)
            diff = F(x, y) - trunc(x, y)
            return 2.0 ** (a + b - 1) * math.exp(2 * z) * abs(diff) ** 2

        res = integrate_region(
            density,
            [("laguerre", 1 - a - b, 2.0), ("jacobi", -a, -b)],
            tol=1e-6,
            start_order=8,
            max_order=64,
        )
        return float(res.value)

    chain = [residual(L) for L in range(9)]
    for before, after in zip(chain, chain[1:]):
        assert after <= before + 1e-9
    assert chain[-1] >= 0
    assert chain[-1] < 0.5 * chain[0]


def test_weighted_norm_frozen_values():
    h = ktype_fn(6.0)
    assert rel(weighted_norm_sq(h), math.gamma(6) / 2**6) < 1e-9
    h2 = ktype_fn(4.5)
    assert rel(weighted_norm_sq(h2), math.gamma(4.5) / 2**4.5) < 1e-9
    zero = l2fn(lambda z: 0.0, 3.0)
    assert weighted_norm_sq(zero) == 0.0


def test_weighted_norm_rejects_bare_callables():
    with pytest.raises(DomainError):
        weighted_norm_sq(lambda z: math.exp(-z))


def test_phi_isometry_frozen_ratio():
    p = RCParams(2, 2, 0)
    h = ktype_fn(4.0)
    ratio = weighted_norm_sq(phi_apply(p, h)) / weighted_norm_sq(h)
    assert rel(ratio, 1.0 / 6.0) < 1e-8


def test_phi_isometry_family():
    for lam1, lam2 in ((2, 2), (2.5, 3), (4, 2)):
        for ell in range(5):
            p = RCParams(lam1, lam2, ell)
            lam3 = float(p.lam3)
            family = (
                lambda z: z ** (lam3 - 1) * math.exp(-z),
                lambda z: z**lam3 * math.exp(-z),
                lambda z: z ** (lam3 - 1) * math.exp(-2 * z),
            )
            c = float(c_ell(lam1, lam2, ell))
            for h in family:
                hn = weighted_norm_sq(l2fn(h, lam3))
                lifted = weighted_norm_sq(phi_apply(p, h))
                assert rel(lifted, c * hn) < 1e-7


def test_plancherel_sum():
    lam1, lam2 = 2, 2.5
    lifts = []
    total = 0.0
    for ell in range(4):
        p = RCParams(lam1, lam2, ell)
        h = ktype_fn(float(p.lam3))
        lifts.append((i_power(ell), phi_apply(p, h)))
        total += float(c_ell(lam1, lam2, ell)) * weighted_norm_sq(h)

    F = l2fn(lambda x, y: sum(w * g(x, y) for w, g in lifts), lam1, lam2)
    assert rel(weighted_norm_sq(F), total) < 1e-6


def test_adjoint_identity():
    # transform on one side of the pairing, lift on the other
    p = RCParams(1, 1, 0)
    F = l2fn(lambda x, y: math.exp(-x - y), 1, 1)
    h = l2fn(lambda z: z * math.exp(-z), 2.0)
    lhs = weighted_inner(h, l2fn(lambda z: rchat_apply(p, F, z), 2.0))
    rhs = weighted_inner(phi_apply(p, h.func), F)
    assert abs(lhs - rhs) / max(1.0, abs(rhs)) < 1e-7

    for ell in (1, 2):
        q = RCParams(2, 2.5, ell)
        lam3 = float(q.lam3)
        h = l2fn(lambda z: z ** (lam3 - 1) * math.exp(-z), lam3)
        other = l2fn(lambda z: z**lam3 * math.exp(-z), lam3)
        F2 = phi_apply(q, other.func)
        transform = l2fn(
            lambda z: rchat_apply(q, F2, z, method="jacobi"), lam3
        )
        lhs = weighted_inner(h, transform)
        rhs = i_power(ell) * weighted_inner(phi_apply(q, h.func), F2)
        assert abs(lhs - rhs) / max(1.0, abs(rhs)) < 1e-7


def test_weighted_inner_guards_and_linearity():
    f = l2fn(lambda z: z * math.exp(-z), 2.0)
    g = l2fn(lambda z: z * z * math.exp(-z), 2.0)
    other = l2fn(lambda z: math.exp(-z), 3.0)
    with pytest.raises(DomainError):
        weighted_inner(f, other)
    with pytest.raises(DomainError):
        weighted_inner(f, lambda z: z)
    base = weighted_inner(f, g)
    scaled = weighted_inner(f, l2fn(lambda z: 1j * g.func(z), 2.0))
    assert abs(scaled - (-1j) * base) < 1e-12


def test_weighted_norm_unconverged_paths():
    wild = l2fn(lambda z: z * math.cos(200.0 * z * z), 2.0)
    with pytest.raises(DomainError):
        weighted_norm_sq(wild)
    value = weighted_norm_sq(wild, strict=False)
    assert isinstance(value, float)


def test_fourier_laplace_pairs():
    F = l2fn(lambda z: math.exp(-z), 1.5)
    for zeta in (1j, 0.5j, 1 + 1j, -0.7 + 0.8j):
        got = fourier_laplace(F, zeta)
        assert abs(got - 1 / (1 - 1j * zeta)) < 1e-10
    for lam in (2.5, 4.0):
        G = l2fn(lambda z: z ** (lam - 1) * math.exp(-z), lam)
        for zeta in (1j, 1 + 0.5j):
            got = fourier_laplace(G, zeta)
            want = math.gamma(lam) * (1 - 1j * zeta) ** (-lam)
            assert abs(got - want) / max(1.0, abs(want)) < 1e-9


def test_fourier_laplace_domain():
    F = l2fn(lambda z: math.exp(-z), 2.0)
    for zeta in (0.0, 1.0, 1 - 1j):
        with pytest.raises(DomainError):
            fourier_laplace(F, zeta)


def test_fourier_laplace_isometry_ratio():
    lam = 3.0
    gamma = math.gamma(lam)

    def G(zeta):
        return gamma * (1 - 1j * zeta) ** (-lam)

    F = l2fn(lambda z: z ** (lam - 1) * math.exp(-z), lam)
    probe = 0.3 + 0.7j
    assert abs(fourier_laplace(F, probe) - G(probe)) < 1e-9

    num = halfplane_norm_sq(G, lam)
    den = math.gamma(lam) / 2**lam
    assert rel(num / den, b_const(lam)) < 1e-3


def test_halfplane_norm_domain():
    with pytest.raises(DomainError):
        halfplane_norm_sq(lambda z: 1.0, 1.0)
