"""Rankin-Cohen symmetry breaking on pairs of half-plane weights.

The forward transform `rc_apply` differentiates a two-variable holomorphic
sum and restricts to the diagonal; it comes in three algebraically equal
routes that are cross-checked exactly.  The backward (holographic) transform
is the weighted segment integral `psi_quadrature`, with its lowest-weight
image available in closed form.  The constants `c_ell`, `r_ell`, `b_const`
tie the two directions together: composing forward after backward multiplies
by c_ell, the operator norm squared is r_ell * c_ell, and the inversion
series uses the weights 1/c_ell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .quadrature import build_rule
from .special_poly import (
    DomainError,
    PoleError,
    as_integer,
    beta,
    complex_gamma,
    is_exact,
    jacobi_inflated,
    jacobi_variant,
    pochhammer,
    reciprocal_gamma,
)
from .term_algebra import (
    HoloSum,
    add,
    base_poly,
    differentiate,
    evaluate,
    holo_sum,
    multiply_expanded,
    qqi,
    restrict,
    scale,
    term,
)

RC_ROUTES = ("coefficients", "inflated", "variant")


@dataclass(frozen=True)
class RCParams:
    """Weight pair and order of the symmetry-breaking operator.

    lam1, lam2 are the two input weights (exact rationals or complex),
    ell is the order; the output weight is lam3 = lam1 + lam2 + 2*ell.
    """

    lam1: object
    lam2: object
    ell: int

    def __post_init__(self):
        if not isinstance(self.ell, int) or isinstance(self.ell, bool) or self.ell < 0:
            raise DomainError("ell must be a nonnegative integer")

    @property
    def lam3(self):
        return self.lam1 + self.lam2 + 2 * self.ell

    @property
    def alpha(self):
        return self.lam1 - 1

    @property
    def beta(self):
        return self.lam2 - 1


# ---------------------------------------------------------------------------
# forward transform


def _operator_coefficients(params: RCParams, route: str) -> dict:
    """Exponent -> coefficient map of the bidifferential operator: the key
    (i, j) stands for d1^i d2^j."""
    ell = params.ell
    if route == "coefficients":
        out = {}
        for j in range(ell + 1):
            c = (
                (-1) ** j
                * pochhammer(params.lam1 + ell - j, j)
                * pochhammer(params.lam2 + j, ell - j)
            )
            out[(ell - j, j)] = c / (math.factorial(j) * math.factorial(ell - j))
        return out
    if route == "inflated":
        return dict(jacobi_inflated(ell, params.alpha, params.beta).items())
    if route == "variant":
        sign = (-1) ** ell
        poly = jacobi_variant(ell, params.alpha, 1 - params.lam3)
        return {e: sign * c for e, c in poly.items()}
    raise DomainError(f"unknown rc_apply route {route!r}")


def rc_apply(params: RCParams, f: HoloSum, route: str = "coefficients") -> HoloSum:
    """Apply the order-ell symmetry-breaking operator and restrict to the
    diagonal, turning a two-variable sum into a one-variable sum.

    All three routes build the same operator; "coefficients" writes the
    two-index coefficient sum directly, "inflated" and "variant" substitute
    the partial derivatives into the two bivariate Jacobi forms.
    """
    if f.arity != 2:
        raise DomainError("rc_apply needs a two-variable sum")
    pieces = []
    for (i, j), c in _operator_coefficients(params, route).items():
        g = differentiate(differentiate(f, 0, i), 1, j)
        pieces.append(scale(g, c))
    total = holo_sum(2, [t for p in pieces for t in p.terms])
    return restrict(total, "diagonal")


# ---------------------------------------------------------------------------
# constants


def _nonpos_int(x: Fraction) -> bool:
    return x.denominator == 1 and x <= 0


def _check_ell(ell: int):
    if not isinstance(ell, int) or isinstance(ell, bool) or ell < 0:
        raise DomainError("ell must be a nonnegative integer")


def c_ell_status(lam1, lam2, ell: int):
    """Classify c_ell at exact parameters by counting simple pole orders.

    Returns ("nonzero", value), ("zero", 0), ("pole", None) or
    ("indeterminate", None); the last kind marks points where numerator and
    denominator singularities collide and the limit depends on the
    direction of approach.
    """
    _check_ell(ell)
    if not (is_exact(lam1) and is_exact(lam2)):
        raise DomainError("c_ell_status needs exact rational weights")
    l1, l2 = Fraction(lam1), Fraction(lam2)
    n1, n2 = l1 + ell, l2 + ell
    d = l1 + l2 + ell - 1
    t = l1 + l2 + 2 * ell - 1
    num_poles = sum(1 for x in (n1, n2) if _nonpos_int(x))
    # d and t move together (both depend on lam1 + lam2 alone), and the
    # simple pole of 1/t at t = 0 always meets the zero of 1/Gamma(d) at
    # d = -ell, so 1/(t Gamma(d)) extends across t = 0 with a nonzero value;
    # the genuine zeros are the remaining nonpositive-integer points of d
    mid_zero = _nonpos_int(d) and t != 0
    if num_poles and mid_zero:
        return ("indeterminate", None)
    if num_poles:
        return ("pole", None)
    if mid_zero:
        return ("zero", Fraction(0))
    if t == 0:
        val = (-1) ** ell * complex_gamma(float(n1)) * complex_gamma(float(n2))
        return ("nonzero", val)
    if n1.denominator == n2.denominator == d.denominator == 1:
        val = Fraction(
            math.factorial(int(n1) - 1) * math.factorial(int(n2) - 1),
            int(t * math.factorial(int(d) - 1) * math.factorial(ell)),
        )
        return ("nonzero", val)
    val = (
        complex_gamma(float(n1))
        * complex_gamma(float(n2))
        * reciprocal_gamma(float(d))
        / (float(t) * math.factorial(ell))
    )
    return ("nonzero", val)


def c_ell(lam1, lam2, ell: int):
    """Composition constant of the transform pair: forward after backward is
    c_ell times the identity.

    Exact Fraction at integer weights, complex otherwise; raises PoleError
    where the continuation has a pole or a direction-dependent limit (use
    c_ell_status to classify without raising).
    """
    _check_ell(ell)
    if is_exact(lam1) and is_exact(lam2):
        kind, val = c_ell_status(lam1, lam2, ell)
        if kind in ("nonzero", "zero"):
            return val
        raise PoleError(f"c_ell is {kind} at ({lam1}, {lam2}, ell={ell})")
    lam3 = lam1 + lam2 + 2 * ell
    num = complex_gamma(lam1 + ell) * complex_gamma(lam2 + ell)
    return num * reciprocal_gamma(lam1 + lam2 + ell - 1) / ((lam3 - 1) * math.factorial(ell))


def b_const(lam):
    """Squared-norm constant of the boundary Fourier transform on weighted
    half-plane spaces; poles at lam in {1, 0, -1, ...}."""
    return 2.0 ** (2 - lam) * math.pi * complex_gamma(lam - 1)


def r_ell(lam1, lam2, ell: int):
    """Quotient b(lam3) / (b(lam1) b(lam2)), continued through the zeros of
    the denominator by reciprocal gammas."""
    _check_ell(ell)
    lam3 = lam1 + lam2 + 2 * ell
    num = complex_gamma(lam3 - 1)
    return (
        num
        * reciprocal_gamma(lam1 - 1)
        * reciprocal_gamma(lam2 - 1)
        / (2 ** (2 * ell + 2) * math.pi)
    )


def rc_operator_norm_sq(params: RCParams) -> float:
    """Operator norm squared r_ell * c_ell between the weighted spaces;
    defined for real weights above 1."""
    for lam in (params.lam1, params.lam2):
        if isinstance(lam, complex) or not float(lam) > 1:
            raise DomainError("operator norm needs real weights > 1")
    value = r_ell(params.lam1, params.lam2, params.ell) * c_ell(
        params.lam1, params.lam2, params.ell
    )
    return float(value)


# ---------------------------------------------------------------------------
# backward transform


def _var_plus_i(arity: int, var: int):
    entries = {tuple(1 if k == var else 0 for k in range(arity)): 1}
    entries[(0,) * arity] = qqi(0, 1)
    return base_poly(arity, entries)


def _pair_difference():
    return base_poly(2, {(1, 0): 1, (0, 1): -1})


def ktype_generator(params: RCParams) -> HoloSum:
    """Lowest-weight generator of the order-ell summand with unit leading
    coefficient:

        (z1 - z2)^ell (z1 + i)^(-lam1-ell) (z2 + i)^(-lam2-ell)

    Kept exact so composition identities can be checked without floats.
    """
    p = params
    bases = [
        (_pair_difference(), Fraction(p.ell)),
        (_var_plus_i(2, 0), -_exp(p.lam1) - p.ell),
        (_var_plus_i(2, 1), -_exp(p.lam2) - p.ell),
    ]
    return holo_sum(2, [term(2, 1, (0, 0), bases)])


def _exp(lam):
    return Fraction(lam) if is_exact(lam) else lam


def psi_ktype_closed_form(params: RCParams) -> HoloSum:
    """Backward transform of the one-variable generator (z + i)^(-lam3):
    the generator of the order-ell summand scaled by B(lam1+ell, lam2+ell)/ell!."""
    p = params
    coeff = beta(p.lam1 + p.ell, p.lam2 + p.ell) / math.factorial(p.ell)
    return scale(ktype_generator(params), coeff)


def psi_quadrature(params: RCParams, g, z1, z2, order: int = 80):
    """Backward (holographic) transform of an evaluable one-variable
    function at the point (z1, z2): a weighted integral over the segment
    joining z1 and z2, by Gauss-Jacobi quadrature.

    Needs real weights with lam1 + ell > 0 and lam2 + ell > 0 for the
    weight exponents to be integrable.
    """
    p = params
    if isinstance(p.lam1, complex) or isinstance(p.lam2, complex):
        raise DomainError("psi_quadrature needs real weights")
    a = float(p.lam1 + p.ell - 1)
    b = float(p.lam2 + p.ell - 1)
    if a <= -1 or b <= -1:
        raise DomainError("psi_quadrature needs lam1 + ell > 0 and lam2 + ell > 0")
    rule = build_rule("jacobi", order, alpha=a, beta=b)
    acc = 0j
    for v, w in zip(rule.nodes, rule.weights):
        acc += w * g(((z2 - z1) * v + (z1 + z2)) / 2)
    pref = (z1 - z2) ** p.ell / (
        2.0 ** float(p.lam1 + p.lam2 + 2 * p.ell - 1) * math.factorial(p.ell)
    )
    return pref * acc


# ---------------------------------------------------------------------------
# Casimir operator


def casimir_P(lam1, lam2, f: HoloSum) -> HoloSum:
    """Second-order operator whose eigenfunctions cut out the order-ell
    summands, with eigenvalue -ell(lam1 + lam2 + ell - 1):

        (z1 - z2)^2 d1 d2 - lam2 (z1 - z2) d1 + lam1 (z1 - z2) d2

    Equals -2(casimir_diag - (lam1+lam2)(lam1+lam2-2)/8) on every
    two-variable sum.
    """
    if f.arity != 2:
        raise DomainError("casimir_P needs a two-variable sum")
    d1 = differentiate(f, 0)
    d2 = differentiate(f, 1)
    d12 = differentiate(d1, 1)
    square = {(2, 0): 1, (1, 1): -2, (0, 2): 1}
    linear = {(1, 0): 1, (0, 1): -1}
    out = multiply_expanded(d12, square)
    out = add(out, scale(multiply_expanded(d1, linear), -_exp(lam2)))
    return add(out, scale(multiply_expanded(d2, linear), _exp(lam1)))


# ---------------------------------------------------------------------------
# projection, inversion, zero set


def project(params: RCParams, f: HoloSum, order: int = 80):
    """Projector (1/c_ell) backward-after-forward onto the order-ell
    summand, returned as an evaluable function of (z1, z2)."""
    g = rc_apply(params, f)
    weight = 1 / c_ell(params.lam1, params.lam2, params.ell)

    def component(z1, z2):
        return weight * psi_quadrature(params, lambda z: evaluate(g, (z,)), z1, z2, order)

    return component


def invert_rc(lam1, lam2, components, L=None, order: int = 80):
    """Reassemble a two-variable function from its one-variable pieces:
    sum over ell of (1/c_ell) times the backward transform of components[ell],
    truncated at L when given.  Each component must be evaluable on segments
    joining upper half-plane points."""
    chosen = []
    for ell in sorted(components):
        if L is not None and ell > L:
            continue
        p = RCParams(lam1, lam2, ell)
        chosen.append((1 / c_ell(lam1, lam2, ell), p, components[ell]))

    def reassembled(z1, z2):
        return sum(w * psi_quadrature(p, g, z1, z2, order) for w, p, g in chosen)

    return reassembled


def zero_classification(lam1, lam2, lam3) -> bool:
    """Whether c_ell vanishes at an integer triple with lam3 - lam1 - lam2
    in 2N, decided by the inequality pair

        2 >= lam1 + lam2 + lam3   and   lam3 >= |lam1 - lam2| + 2.
    """
    v1, v2, v3 = as_integer(lam1), as_integer(lam2), as_integer(lam3)
    if v1 is None or v2 is None or v3 is None:
        raise DomainError("zero_classification needs an integer triple")
    gap = v3 - v1 - v2
    if gap < 0 or gap % 2:
        raise DomainError("lam3 - lam1 - lam2 must be an even natural number")
    return 2 >= v1 + v2 + v3 and v3 >= abs(v1 - v2) + 2
