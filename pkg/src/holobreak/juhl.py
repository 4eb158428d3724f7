"""Cone-side symmetry breaking: the holomorphic differential operator built
from Gegenbauer coefficients, its polynomial eigen-identity on powers of the
Lorentz form, and the matching holographic machinery on time-like cones.

The half-line story of `l2_model` repeats here one rank higher.  The
differential operator drops one variable by restricting to a hyperplane; on
the cone side it becomes a fiberwise Gegenbauer expansion, the holographic
partner is a multiplication operator, and the inverse direction is realized
either through a two-domain kernel integral or through the multiplication
model followed by a Fourier-Laplace transform.

Symbolic identities (the eigen-identity, route equivalence, the kernel shape
under the operator) run in exact rational arithmetic through `term_algebra`;
everything metric (isometry ratios, fiber transforms, kernel integrals) is
quadrature with explicit weight folding.

Branch convention: kernel powers use a cut along [0, +inf) with argument in
(0, 2pi), not the principal cut.  Tube-domain arguments of the Lorentz form
never meet the positive real axis, while they do cross the negative one,
so the principal branch is the wrong tool here.  See `_power_positive_cut`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .l2_model import i_power
from .quadrature import (
    build_rule,
    geometric_panels,
    integrate_adaptive,
    integrate_region,
)
from .special_poly import (
    DomainError,
    PoleError,
    complex_gamma,
    gegenbauer_a,
    gegenbauer_inflated,
    gegenbauer_norm_sq,
    gegenbauer_poly,
    is_exact,
    pochhammer,
)
from .term_algebra import (
    BranchCutError,
    ExactnessError,
    HoloSum,
    add,
    base_poly,
    canonical_form,
    differentiate,
    e_key,
    holo_sum,
    qqi,
    restrict,
    s_add,
    s_is_zero,
    s_mul,
    s_neg,
    scale,
    sub,
    term,
)

_I_QQI = (qqi(1), qqi(0, 1), qqi(-1), qqi(0, -1))


@dataclass(frozen=True)
class JuhlParams:
    """Parameter triple (n, lam, ell) of one cone-level breaking operator.

    `n` is the ambient dimension (at least 3), `lam` the source weight,
    `ell` the drop in the fiber degree.  The target weight is nu = lam + ell
    and the Gegenbauer parameter alpha = lam - (n-1)/2; both stay exact when
    `lam` is rational.  Unitary-range checks need lam real with lam > n - 1.
    """

    n: int
    lam: object
    ell: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 3:
            raise DomainError(f"need integer dimension n >= 3, got {self.n!r}")
        if not isinstance(self.ell, int) or self.ell < 0:
            raise DomainError(f"need integer ell >= 0, got {self.ell!r}")

    @property
    def nu(self):
        return self.lam + self.ell

    @property
    def alpha(self):
        if is_exact(self.lam):
            return Fraction(self.lam) - Fraction(self.n - 1, 2)
        return self.lam - (self.n - 1) / 2.0


def _real_scalar(x, what: str) -> float:
    if isinstance(x, complex):
        if x.imag != 0:
            raise DomainError(f"{what} must be real, got {x!r}")
        return x.real
    return float(x)


# ---------------------------------------------------------------------------
# cone geometry


def q_form(y):
    """Lorentz form y1^2 - y2^2 - ... - yk^2; exactness follows the inputs."""
    y = tuple(y)
    if not y:
        raise DomainError("q_form needs at least one coordinate")
    out = y[0] * y[0]
    for c in y[1:]:
        out = out - c * c
    return out


def _real_vector(y):
    try:
        return tuple(_real_scalar(c, "cone coordinate") for c in y)
    except TypeError as exc:
        raise DomainError(f"bad cone point {y!r}") from exc


def in_cone(y) -> bool:
    """Membership in the open time-like cone: positive form, positive y1."""
    y = _real_vector(y)
    return y[0] > 0 and q_form(y) > 0


def iota_cone(y_prime, v):
    """Fiber chart (y', v) -> (y', -sqrt(Q(y')) v) over the one-lower cone."""
    y_prime = _real_vector(y_prime)
    if not in_cone(y_prime):
        raise DomainError(f"base point {y_prime!r} is not in the cone")
    v = float(v)
    if not -1.0 < v < 1.0:
        raise DomainError(f"fiber coordinate must lie in (-1, 1), got {v}")
    return y_prime + (-math.sqrt(q_form(y_prime)) * v,)


def weight_M_cone(params: JuhlParams, y_prime, v) -> float:
    """Fiber weight Q(y')^((ell+1)/2) (1 - v^2)^(n/2 - lam).

    Defined for v in [-1, 1]; an endpoint with a negative exponent on
    1 - v^2 is rejected rather than returned as infinity.
    """
    lam = _real_scalar(params.lam, "weight exponent")
    y_prime = _real_vector(y_prime)
    if not in_cone(y_prime):
        raise DomainError(f"base point {y_prime!r} is not in the cone")
    v = float(v)
    if not -1.0 <= v <= 1.0:
        raise DomainError(f"fiber coordinate must lie in [-1, 1], got {v}")
    expo = params.n / 2.0 - lam
    edge = 1.0 - v * v
    if edge == 0.0:
        if expo < 0:
            raise DomainError("weight is singular at v = +-1 for this lam")
        fiber = 1.0 if expo == 0 else 0.0
    else:
        fiber = edge**expo
    return q_form(y_prime) ** (0.5 * (params.ell + 1)) * fiber


def cone_density(lam, y) -> float:
    """Weight Q(y)^(k/2 - lam) of the cone measure in dimension k = len(y)."""
    lam = _real_scalar(lam, "density exponent")
    y = _real_vector(y)
    if not in_cone(y):
        raise DomainError(f"point {y!r} is not in the cone")
    return q_form(y) ** (len(y) / 2.0 - lam)


# ---------------------------------------------------------------------------
# the differential operator, in two equivalent forms


JUHL_ROUTES = ("coefficients", "inflated")


def lorentz_laplacian(f: HoloSum, nvars: int) -> HoloSum:
    """Signature (1, nvars-1) wave operator acting on the leading variables."""
    if not 1 <= nvars <= f.arity:
        raise DomainError(f"laplacian over {nvars} of {f.arity} variables")
    out = differentiate(f, 0, 2)
    for j in range(1, nvars):
        out = sub(out, differentiate(f, j, 2))
    return out


def _unrestricted_operator(params: JuhlParams, f: HoloSum, route: str) -> HoloSum:
    n, ell, alpha = params.n, params.ell, params.alpha
    if f.arity != n:
        raise DomainError(f"expected a sum in {n} variables, got {f.arity}")
    if route not in JUHL_ROUTES:
        raise DomainError(f"unknown route {route!r}; pick one of {JUHL_ROUTES}")
    inflated = gegenbauer_inflated(ell, alpha) if route == "inflated" else None
    total = holo_sum(n, [])
    wave_k = f
    for k in range(ell // 2 + 1):
        piece = differentiate(wave_k, n - 1, ell - 2 * k)
        if route == "coefficients":
            coeff = gegenbauer_a(ell, k, alpha)
        else:
            # substitute u -> -wave, v -> i d/dz_n into the two-variable form
            coeff = s_mul(inflated.coeff(k, ell - 2 * k), _I_QQI[(ell - 2 * k) % 4])
            coeff = s_mul(coeff, _I_QQI[(-ell) % 4])
            if k % 2:
                coeff = s_neg(coeff)
        total = add(total, scale(piece, coeff))
        if 2 * (k + 1) <= ell:
            wave_k = lorentz_laplacian(wave_k, n - 1)
    return total


def juhl_sbo_apply(
    params: JuhlParams, f: HoloSum, route: str = "coefficients"
) -> HoloSum:
    """Apply the breaking operator: Gegenbauer-weighted wave and normal
    derivatives followed by restriction to the hyperplane z_n = 0.

    Both routes produce the same sum; `coefficients` expands the explicit
    a_k ladder, `inflated` substitutes operators into the two-variable
    Gegenbauer form with exact fourth-root-of-unity bookkeeping.
    """
    return restrict(_unrestricted_operator(params, f, route), "last-zero")


# ---------------------------------------------------------------------------
# the eigen-identity on powers of the form


def q_constant(n: int, ell: int, lam):
    """Eigenvalue polynomial (2^ell / ell!) (2 lam - n + 1)_ell (lam)_ell."""
    if ell < 0:
        raise DomainError("q_constant needs ell >= 0")
    lead = Fraction(2**ell, math.factorial(ell))
    return lead * pochhammer(2 * lam - n + 1, ell) * pochhammer(lam, ell)


def _wave_base(n: int):
    entries = {}
    for i in range(n):
        e = [0] * n
        e[i] = 2
        entries[tuple(e)] = 1 if i == 0 else -1
    return base_poly(n, entries)


def _entries_power(entries, j: int, arity: int):
    """Monomial expansion of (sum of entries)^j as an exponent -> QQi dict."""
    acc = {(0,) * arity: qqi(1)}
    for _ in range(j):
        nxt = {}
        for e1, c1 in acc.items():
            for e2, c2 in entries:
                e = tuple(a + b for a, b in zip(e1, e2))
                v = s_mul(c1, c2)
                prev = nxt.get(e)
                nxt[e] = v if prev is None else s_add(prev, v)
        acc = {k: v for k, v in nxt.items() if not s_is_zero(v)}
    return acc


def bernstein_sato_verify(params: JuhlParams):
    """Apply the operator to Q^(-lam) without restriction and resolve the
    result against the ladder z_n^(ell-2j) Q^(-lam-ell+j).

    Returns (q0, higher) where q0 is the extracted leading constant and
    `higher` lists every nonzero (j, coefficient) with j >= 1.  The identity
    under test says q0 equals `q_constant` and `higher` is empty; callers
    assert that.  The extraction is triangular from the top: the coefficient
    of z1^(2j) z_n^(ell-2j) only receives contributions from rungs >= j, so
    peeling highest-first isolates each q_j exactly.  A residue that fits no
    rung at all raises ArithmeticError.
    """
    if not is_exact(params.lam):
        raise ExactnessError(f"exact verification needs rational lam, got {params.lam!r}")
    n, ell = params.n, params.ell
    lam = Fraction(params.lam)
    q_base = _wave_base(n)
    f = holo_sum(n, [term(n, 1, None, [(q_base, -lam)])])
    applied = _unrestricted_operator(params, f, "coefficients")
    canon = canonical_form(applied)

    floor_sig = None
    remaining = {}
    for (mono, sig), coeff in canon.items():
        if len(sig) != 1:
            raise ArithmeticError(f"unexpected base structure {sig!r}")
        if floor_sig is None:
            floor_sig = sig
        elif sig != floor_sig:
            raise ArithmeticError("mixed base exponents after canonicalization")
        remaining[mono] = coeff
    if floor_sig is not None and floor_sig[0][1] != e_key(-lam - ell):
        raise ArithmeticError(f"unexpected floor exponent {floor_sig!r}")

    extracted = {}
    for j in range(ell // 2, -1, -1):
        probe = [0] * n
        probe[0] = 2 * j
        probe[-1] = ell - 2 * j
        probe = tuple(probe)
        c = remaining.get(probe)
        if c is None or s_is_zero(c):
            extracted[j] = qqi(0)
            continue
        extracted[j] = c
        shift = [0] * n
        shift[-1] = ell - 2 * j
        for e, w in _entries_power(q_base.entries, j, n).items():
            key = tuple(a + b for a, b in zip(e, shift))
            prev = remaining.get(key, qqi(0))
            nxt = s_add(prev, s_neg(s_mul(c, w)))
            if s_is_zero(nxt):
                remaining.pop(key, None)
            else:
                remaining[key] = nxt
    if remaining:
        raise ArithmeticError(f"residue outside the ladder: {sorted(remaining)[:4]}")
    higher = [(j, c) for j, c in sorted(extracted.items()) if j >= 1 and not s_is_zero(c)]
    return extracted[0], higher


def coefficient_ladder(params: JuhlParams):
    """Re-expansion coefficients of the operator over the full wave operator.

    Substituting (partial wave) = (full wave) + d_n^2 turns the a_k ladder
    into sum_m p_m (full wave)^m d_n^(ell-2m) with
    p_m = sum_(k>=m) C(k, m) a_k; alongside, s_k is the scalar produced by
    k full-wave hits on Q^(-lam):  s_0 = 1,
    s_(k+1) = s_k * 2(lam+k)(2(lam+k) - n + 2).
    """
    n, ell, lam = params.n, params.ell, params.lam
    top = ell // 2
    a = [gegenbauer_a(ell, k, params.alpha) for k in range(top + 1)]
    p = [
        sum(math.comb(k, m) * a[k] for k in range(m, top + 1))
        for m in range(top + 1)
    ]
    s = [Fraction(1) if is_exact(lam) else 1.0]
    for k in range(top):
        s.append(s[-1] * 2 * (lam + k) * (2 * (lam + k) - n + 2))
    return p, s


# ---------------------------------------------------------------------------
# multiplication model on the cone and the fiber transform


def phi_cone_apply(params: JuhlParams, h):
    """Holographic lift: multiply h(y') by the fiber Gegenbauer profile.

    Returns a callable on the n-dimensional cone,

        Q'^(-(ell + 1/2)) (Q(y)/Q')^(lam - n/2) (inflated C)(Q', -y_n) h(y')

    with Q' the form of the leading n-1 coordinates.  In the fiber chart
    this is exactly (1/M) C_ell(v) h(y'), the multiplication form.
    """
    lam = _real_scalar(params.lam, "weight")
    n, ell = params.n, params.ell
    profile = gegenbauer_inflated(ell, float(params.alpha))

    def lifted(y):
        y = _real_vector(y)
        if len(y) != n or not in_cone(y):
            raise DomainError(f"point {y!r} is not in the {n}-dimensional cone")
        y_prime, y_n = y[:-1], y[-1]
        q_prime = q_form(y_prime)
        ratio = q_form(y) / q_prime
        return (
            q_prime ** (-(ell + 0.5))
            * ratio ** (lam - n / 2.0)
            * profile(q_prime, -y_n)
            * h(y_prime)
        )

    return lifted


def juhl_hat_apply(params: JuhlParams, F, y_prime, method: str = "jacobi", tol: float = 1e-10):
    """Fiber Gegenbauer coefficient of F over the base point y'.

    Integrates F along the fiber against C_ell and scales by
    i^(-ell) Q'^((ell+1)/2).  Method `jacobi` folds the Gegenbauer weight
    (1-v^2)^(alpha - 1/2) into the rule, which is exact when F is a lifted
    function; `legendre` integrates the bare fiber restriction and suits
    profiles without that boundary decay.  Non-convergence raises.
    """
    y_prime = _real_vector(y_prime)
    if not in_cone(y_prime):
        raise DomainError(f"base point {y_prime!r} is not in the cone")
    ell = params.ell
    alpha = _real_scalar(params.alpha, "Gegenbauer parameter")
    poly = gegenbauer_poly(ell, alpha)
    root = math.sqrt(q_form(y_prime))

    def along(v: float):
        return F(y_prime + (-root * v,)) * poly(v)

    if method == "jacobi":
        a_w = alpha - 0.5

        def g(v):
            return along(v) * (1.0 - v * v) ** (-a_w)

        res = integrate_adaptive(g, "jacobi", tol=tol, alpha=a_w, beta=a_w)
    elif method == "legendre":
        res = integrate_adaptive(along, "legendre", tol=tol, a=-1.0, b=1.0)
    else:
        raise DomainError(f"unknown fiber method {method!r}")
    if not res.converged:
        raise DomainError(f"fiber integral did not converge (err {res.error:.2e})")
    return i_power(-ell) * q_form(y_prime) ** (0.5 * (ell + 1)) * res.value


def phi_isometry_ratio(params: JuhlParams, h, y_prime, tol: float = 1e-10) -> float:
    """Fiber-factorized isometry ratio of the lift at one base point.

    The squared lift integrated over the fiber, against the slice of the
    n-dimensional cone measure, divided by |h|^2 times the (n-1)-dimensional
    density.  Constant in y' and equal to the lift's isometry constant, so a
    single base point decides the ratio.
    """
    lam = _real_scalar(params.lam, "weight")
    n = params.n
    y_prime = _real_vector(y_prime)
    lifted = phi_cone_apply(params, h)
    root = math.sqrt(q_form(y_prime))
    a_w = lam - n / 2.0

    def g(v):
        val = lifted(y_prime + (-root * v,))
        return abs(val) ** 2 * (1.0 - v * v) ** (n - 2.0 * lam)

    res = integrate_adaptive(g, "jacobi", tol=tol, alpha=a_w, beta=a_w)
    if not res.converged:
        raise DomainError(f"fiber integral did not converge (err {res.error:.2e})")
    numer = q_form(y_prime) ** ((n + 1) / 2.0 - lam) * res.value
    denom = abs(h(y_prime)) ** 2 * cone_density(params.nu, y_prime)
    if denom == 0.0:
        raise DomainError("h vanishes at the probe point")
    return numer / denom


# ---------------------------------------------------------------------------
# constants


def kernel_normalization(n: int, lam):
    """Reproducing-kernel constant of the weighted space on the n-cone tube.

    (2i)^(2 lam) (lam - n/2) (lam - n + 1)_(n-1) / (2 pi)^n, with the
    power on the principal branch.  The Gamma quotient is expanded as a
    Pochhammer product, so the expression is entire in lam.

    Calibrated so that k Q(z - conj(w))^(-lam) self-reproduces against the
    plain measure Q(Im tau)^(lam - n) dx deta.  At n = 1, lam = 1 this
    collapses to the classical unweighted half-plane kernel -1/pi
    (z - conj(w))^(-2).
    """
    lam_c = complex(lam)
    phase = cmath.exp(2.0 * lam_c * cmath.log(2j))
    rising = complex(pochhammer(lam_c - n + 1, n - 1))
    return phase * (lam_c - n / 2.0) * rising / (2.0 * math.pi) ** n


def _fourier_norm_const(m: int, s: float) -> float:
    # (2 pi)^(3m/2 - 1) 2^(-m/2) Gamma(s - m/2) Gamma(s - m + 1); at m = 1
    # this reduces by Legendre duplication to 2 pi 2^(1 - 2s) Gamma(2s - 1),
    # the classical half-plane Parseval constant
    g1 = complex_gamma(s - m / 2.0)
    g2 = complex_gamma(s - m + 1.0)
    return (2.0 * math.pi) ** (1.5 * m - 1.0) * 2.0 ** (-0.5 * m) * (g1 * g2).real


def cone_constants(params: JuhlParams) -> dict:
    """All scalar constants of one (n, lam, ell) level, by closed form.

    Keys: `c_ell` (fiber Gegenbauer norm), `r_ell` (transform-constant
    ratio), `b_n` and `b_prev` (Fourier-Laplace isometry constants of the
    two cone levels), `kernel_const`, and `adjoint_const` (the scalar in
    front of the kernel realization of the adjoint).  Gamma poles surface
    as PoleError.
    """
    lam = _real_scalar(params.lam, "weight")
    n, ell = params.n, params.ell
    nu = lam + ell
    c_ell = gegenbauer_norm_sq(ell, float(params.alpha))
    num = (
        math.sqrt(2.0)
        * complex_gamma(lam + ell - (n - 1) / 2.0)
        * complex_gamma(lam + ell - n + 2.0)
    )
    den = (
        (2.0 * math.pi) ** 1.5
        * complex_gamma(lam - n / 2.0)
        * complex_gamma(lam - n + 1.0)
    )
    r_ell = (num / den).real
    adjoint = (
        2.0 ** (2 * lam - n + ell - 1)
        * complex(pochhammer(lam - n + 1.0, n + ell - 1))
        * complex(pochhammer(2.0 * lam - n, ell + 1))
        / (cmath.exp(1j * math.pi * (lam + ell)) * math.pi**n * math.factorial(ell))
    )
    return {
        "c_ell": float(c_ell.real if isinstance(c_ell, complex) else c_ell),
        "r_ell": r_ell,
        "b_n": _fourier_norm_const(n, lam),
        "b_prev": _fourier_norm_const(n - 1, nu),
        "kernel_const": kernel_normalization(n, lam),
        "adjoint_const": adjoint,
    }


def juhl_operator_norm_sq(params: JuhlParams) -> float:
    """Squared operator norm of the breaking operator: r_ell * c_ell."""
    consts = cone_constants(params)
    return consts["r_ell"] * consts["c_ell"]


# ---------------------------------------------------------------------------
# kernels and the holographic integral


def _power_positive_cut(w, s):
    """w^s with the branch cut along [0, +inf): argument taken in (0, 2pi).

    Values of the Lorentz form on tube-domain differences stay off the
    positive real axis but routinely cross the negative one, where the
    principal branch would jump.  Arguments within 1e-10 of the cut raise.
    """
    w = complex(w)
    if w == 0:
        raise PoleError("zero base in a kernel power")
    a = cmath.phase(w)
    if a <= 0.0:
        a += 2.0 * math.pi
    if min(a, 2.0 * math.pi - a) < 1e-10:
        raise BranchCutError(f"argument of {w!r} within 1e-10 of the [0, inf) cut")
    return cmath.exp(complex(s) * (math.log(abs(w)) + 1j * a))


def _require_tube(z, dim: int, what: str):
    z = tuple(complex(c) for c in z)
    if len(z) != dim:
        raise DomainError(f"{what} must have {dim} coordinates, got {len(z)}")
    if not in_cone(tuple(c.imag for c in z)):
        raise DomainError(f"{what} {z!r} is outside the tube domain")
    return z


def relative_kernel(params: JuhlParams, zeta, tau_prime):
    """Two-domain kernel z_n^ell Q((z' - conj(t'), z_n))^(-nu).

    Stored with the nonnegative z_n power multiplied through, so the value
    is regular on the hyperplane z_n = 0 instead of carrying a removable
    quotient singularity.
    """
    n = params.n
    zeta = _require_tube(zeta, n, "first kernel argument")
    tau_prime = _require_tube(tau_prime, n - 1, "second kernel argument")
    w = tuple(zc - tc.conjugate() for zc, tc in zip(zeta, tau_prime)) + (zeta[-1],)
    nu = complex(params.nu)
    return _power_positive_cut(q_form(w), -nu) * zeta[-1] ** params.ell


def holographic_integral(
    params: JuhlParams, g, zeta, radius: float = 20.0, order: int = 24
):
    """Adjoint realization as a kernel integral over the lower tube (n = 3).

    Fixed-order product quadrature: Legendre in both real parts on
    (-radius, radius), and in the imaginary parts light-cone coordinates
    s, t on (0, radius) with the measure weight (st)^(nu - 2) folded into
    Jacobi rules.  The result is the kernel pairing times the adjoint
    constant.  Accuracy is the documented smoke-test level (about 1e-2 at
    the defaults), not a converged integral.
    """
    if params.n != 3:
        raise DomainError("the kernel integral is only implemented for n = 3")
    zeta = _require_tube(zeta, 3, "evaluation point")
    nu = _real_scalar(params.nu, "target weight")
    consts = cone_constants(params)
    rule_x = build_rule("legendre", order, a=-radius, b=radius)
    rule_st = build_rule("jacobi", order, alpha=0.0, beta=nu - 2.0)
    cone_nodes = [0.5 * radius * (1.0 + u) for u in rule_st.nodes]
    edge_scale = (0.5 * radius) ** (nu - 1.0)

    z1, z2, z3 = zeta
    z3_pow = z3**params.ell
    z3_sq = z3 * z3
    total = 0.0j
    for s_val, ws in zip(cone_nodes, rule_st.weights):
        for t_val, wt in zip(cone_nodes, rule_st.weights):
            eta1 = 0.5 * (s_val + t_val)
            eta2 = 0.5 * (s_val - t_val)
            w_st = ws * wt
            for x1, w1 in zip(rule_x.nodes, rule_x.weights):
                tau1 = complex(x1, eta1)
                d1 = z1 - tau1.conjugate()
                for x2, w2 in zip(rule_x.nodes, rule_x.weights):
                    tau2 = complex(x2, eta2)
                    d2 = z2 - tau2.conjugate()
                    kern = _power_positive_cut(d1 * d1 - d2 * d2 - z3_sq, -nu)
                    total += w_st * w1 * w2 * kern * g((tau1, tau2))
    return consts["adjoint_const"] * z3_pow * 0.5 * edge_scale**2 * total


def cone_fourier_laplace(
    F,
    zeta,
    n: int,
    rho_exponent: float = 0.0,
    y_max: float = 40.0,
    tol: float = 1e-6,
    start_order: int = 8,
    max_order: int = 48,
    strict: bool = True,
):
    """Fourier-Laplace transform of F over the n-dimensional cone, n in {3, 4}.

    Disk coordinates: y = (y1, y1 rho omega) with omega on the unit sphere.
    `rho_exponent` declares how fast F vanishes at the cone boundary, as a
    power of (1 - rho^2); it is folded into the radial Jacobi weight, so a
    lifted integrand with fractional boundary decay still converges at
    spectral rate.  The imaginary part of zeta must lie in the open cone,
    which is what makes the oscillatory factor decay.
    """
    if n not in (3, 4):
        raise DomainError("cone transform implemented for n in {3, 4}")
    zeta = _require_tube(zeta, n, "transform argument")
    re = float(rho_exponent)
    panels = geometric_panels(0.0, y_max, first=0.25)
    axes = [("panels", panels), ("jacobi", re, 0.0), ("legendre", 0.0, 2.0 * math.pi)]
    if n == 4:
        axes.append(("legendre", 0.0, math.pi))

    def integrand(y1, u, theta, *rest):
        rho = 0.5 * (1.0 + u)
        if n == 3:
            y = (y1, y1 * rho * math.cos(theta), y1 * rho * math.sin(theta))
            jac = y1 * y1 * rho
        else:
            phi = rest[0]
            sp = math.sin(phi)
            y = (
                y1,
                y1 * rho * sp * math.cos(theta),
                y1 * rho * sp * math.sin(theta),
                y1 * rho * math.cos(phi),
            )
            jac = y1**3 * rho * rho * sp
        pairing = sum(yc * zc for yc, zc in zip(y, zeta))
        defold = (1.0 - u) ** (-re) if re else 1.0
        return F(y) * cmath.exp(1j * pairing) * jac * 0.5 * defold

    res = integrate_region(
        integrand, axes, tol=tol, start_order=start_order, max_order=max_order
    )
    if strict and not res.converged:
        raise DomainError(f"cone transform did not converge (err {res.error:.2e})")
    return res.value


def invert_juhl(
    n: int,
    lam,
    components: dict,
    L=None,
    method: str | None = None,
    radius: float = 20.0,
    order: int = 24,
    y_max: float = 40.0,
    tol: float = 1e-6,
):
    """Assemble the inverse series from per-level components.

    `components` maps ell to a component function.  Method `holographic`
    (default at n = 3) expects holomorphic components on the lower tube and
    pairs each against the kernel with weight 1/(r_ell c_ell); method `l2`
    expects cone-model components on the lower cone, lifts each one, and
    runs the Fourier-Laplace transform with weight i^ell / c_ell.  Levels
    above L are dropped.  Returns a callable on the n-tube.
    """
    if method is None:
        method = "holographic" if n == 3 else "l2"
    items = []
    for ell, comp in sorted(components.items()):
        if not isinstance(ell, int) or ell < 0:
            raise DomainError(f"component level must be a natural number, got {ell!r}")
        if L is not None and ell > L:
            continue
        items.append((ell, comp))

    if method == "holographic":
        if n != 3:
            raise DomainError("holographic assembly is only available at n = 3")
        plan = []
        for ell, comp in items:
            p = JuhlParams(n, lam, ell)
            consts = cone_constants(p)
            plan.append((p, comp, 1.0 / (consts["r_ell"] * consts["c_ell"])))

        def assembled(zeta):
            total = 0.0j
            for p, comp, w in plan:
                total += w * holographic_integral(p, comp, zeta, radius, order)
            return total

        return assembled

    if method == "l2":
        lam_f = _real_scalar(lam, "weight")
        plan = []
        for ell, comp in items:
            p = JuhlParams(n, lam, ell)
            lift = phi_cone_apply(p, comp)
            w = i_power(ell) / cone_constants(p)["c_ell"]
            plan.append((lift, w))
        boundary = lam_f - n / 2.0

        def assembled(zeta):
            total = 0.0j
            for lift, w in plan:
                total += w * cone_fourier_laplace(
                    lift, zeta, n, rho_exponent=boundary, y_max=y_max, tol=tol
                )
            return total

        return assembled

    raise DomainError(f"unknown assembly method {method!r}")
