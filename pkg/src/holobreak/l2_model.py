"""Half-line models of the transform pair.

Functions live in weighted spaces on (0, inf) or (0, inf)^2, carrying their
weight exponents with them.  The multiplication operator `phi_apply` maps a
one-variable function to two variables; `rchat_apply` integrates back down
along the anti-diagonal segments x + y = z.  In the slanted coordinates
(z, v) of `iota` the pair diagonalizes into a Jacobi expansion along v,
which is what the inversion series `invert_rchat` sums.  `fourier_laplace`
bridges to the half-plane picture, with `halfplane_norm_sq` providing the
truncated norm on the other side.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .quadrature import geometric_panels, integrate_adaptive, integrate_region
from .rc_transform import RCParams, c_ell
from .special_poly import DomainError, jacobi_poly

_I_POWERS = (1 + 0j, 1j, -1 + 0j, -1j)


def i_power(k: int) -> complex:
    """Exact integer power of the imaginary unit."""
    return _I_POWERS[k % 4]


@dataclass(frozen=True)
class L2Fn:
    """Evaluable function together with its declared weight exponents.

    weights has one entry for a half-line function (space with measure
    x^(1-lam) dx) and two for a quarter-plane function (product measure
    x^(1-lam1) y^(1-lam2) dx dy).
    """

    func: object
    weights: tuple

    def __call__(self, *args):
        return self.func(*args)

    @property
    def arity(self) -> int:
        return len(self.weights)


def l2fn(func, *weights) -> L2Fn:
    if len(weights) not in (1, 2):
        raise DomainError("l2fn takes one or two weight exponents")
    return L2Fn(func, tuple(weights))


def _as_callable(f):
    return f.func if isinstance(f, L2Fn) else f


# ---------------------------------------------------------------------------
# slanted coordinates


def iota(z, v):
    """Coordinate change (z, v) -> (x, y) = (z(1-v)/2, z(1+v)/2)."""
    if not z > 0:
        raise DomainError("iota needs z > 0")
    if not -1 < v < 1:
        raise DomainError("iota needs v in (-1, 1)")
    return z * (1 - v) / 2, z * (1 + v) / 2


def iota_inv(x, y):
    if not (x > 0 and y > 0):
        raise DomainError("iota_inv needs x, y > 0")
    return x + y, (y - x) / (x + y)


def weight_M(params, z, v):
    """Jacobian-weight factor 2^(a+b) z^(ell+1) (1-v)^(-a) (1+v)^(-b) of the
    slanted coordinates, with (a, b) the shifted weights (alpha, beta)."""
    if not z > 0:
        raise DomainError("weight_M needs z > 0")
    if not -1 <= v <= 1:
        raise DomainError("weight_M needs v in [-1, 1]")
    a = float(params.alpha)
    b = float(params.beta)
    if v == 1 and a > 0:
        raise DomainError("weight_M has a pole at v = 1 for alpha > 0")
    if v == -1 and b > 0:
        raise DomainError("weight_M has a pole at v = -1 for beta > 0")
    return (
        2.0 ** (a + b)
        * float(z) ** (params.ell + 1)
        * (1.0 - v) ** (-a)
        * (1.0 + v) ** (-b)
    )


# ---------------------------------------------------------------------------
# the multiplication operator and its partner


def phi_apply(params, h) -> L2Fn:
    """Lift a half-line function to the quarter plane:

        (x, y) |-> x^a y^b (x+y)^(-(lam1+lam2+ell-1)) P(v(x,y)) h(x+y)

    with P the degree-ell Jacobi polynomial for (a, b) = (alpha, beta) and
    v(x, y) = (y-x)/(x+y).  Scales half-line norms by c_ell.
    """
    if isinstance(h, L2Fn):
        if h.weights != (params.lam3,):
            raise DomainError(
                f"phi_apply needs a function of declared weight {params.lam3}"
            )
        h = h.func
    a = float(params.alpha)
    b = float(params.beta)
    drop = float(params.lam1 + params.lam2 + params.ell - 1)
    poly = jacobi_poly(params.ell, params.alpha, params.beta)

    def lifted(x, y):
        z = x + y
        return x**a * y**b * z**-drop * float(poly((y - x) / z)) * h(z)

    return L2Fn(lifted, (params.lam1, params.lam2))


def rchat_apply(params, F, z, method: str = "legendre", tol: float = 1e-10):
    """Integrate a quarter-plane function down to one variable:

        z^(ell+1)/(2 i^ell) * integral of P(v) F(iota(z, v)) over (-1, 1).

    method "legendre" integrates the product directly; "jacobi" folds the
    endpoint factors (1-v)^alpha (1+v)^beta into the quadrature weight,
    which is exact when F is a lift from phi_apply.  Raises if the adaptive
    quadrature does not converge.
    """
    if not z > 0:
        raise DomainError("rchat_apply needs z > 0")
    fn = _as_callable(F)
    poly = jacobi_poly(params.ell, params.alpha, params.beta)

    if method == "legendre":
        def integrand(v):
            x, y = z * (1 - v) / 2, z * (1 + v) / 2
            return float(poly(v)) * fn(x, y)

        res = integrate_adaptive(integrand, "legendre", tol=tol, a=-1.0, b=1.0)
    elif method == "jacobi":
        a = float(params.alpha)
        b = float(params.beta)

        def integrand(v):
            x, y = z * (1 - v) / 2, z * (1 + v) / 2
            return float(poly(v)) * fn(x, y) * (1 - v) ** -a * (1 + v) ** -b

        res = integrate_adaptive(
            integrand, "jacobi", tol=tol, alpha=a, beta=b
        )
    else:
        raise DomainError(f"unknown rchat_apply method {method!r}")
    if not res.converged:
        raise DomainError("rchat_apply quadrature did not converge")
    return float(z) ** (params.ell + 1) / 2 * i_power(-params.ell) * res.value


def invert_rchat(lam1, lam2, components, L=None) -> L2Fn:
    """Reassemble a quarter-plane function from its one-variable pieces:
    the sum over ell of (i^ell / c_ell) times the lift of components[ell],
    truncated at L when given."""
    lifts = []
    for ell in sorted(components):
        if L is not None and ell > L:
            continue
        p = RCParams(lam1, lam2, ell)
        weight = i_power(ell) / complex(c_ell(lam1, lam2, ell))
        lifts.append((weight, phi_apply(p, _as_callable(components[ell]))))

    def reassembled(x, y):
        return sum((w * g(x, y) for w, g in lifts), 0j)

    return L2Fn(reassembled, (lam1, lam2))


# ---------------------------------------------------------------------------
# norms and inner products


def _guarded(g):
    # deep quadrature nodes can overflow the e^(2z) unfolding factor even
    # though the weighted integrand there is negligible for anything of
    # finite norm; treat such nodes as zero instead of crashing
    def safe(*args):
        try:
            return g(*args)
        except OverflowError:
            return 0.0

    return safe


def _fold_one(fn, lam):
    # integrand against the Laguerre weight z^(lam-1) e^(-2z): the extra
    # z^(2-2 lam) e^(2z) restores |f|^2 z^(1-lam)
    expo = 2.0 - 2.0 * float(lam)

    def g(zval):
        val = fn(zval)
        return abs(val) ** 2 * zval**expo * math.exp(2 * zval)

    return _guarded(g)


def weighted_norm_sq(f: L2Fn, tol: float = 1e-10, strict: bool = True) -> float:
    """Squared norm of a declared-weight function by adaptive quadrature
    with the weight folded into a scaled Laguerre rule."""
    if not isinstance(f, L2Fn):
        raise DomainError("weighted_norm_sq needs a declared-weight function")
    if f.arity == 1:
        lam = f.weights[0]
        res = integrate_adaptive(
            _fold_one(f.func, lam), "laguerre", tol=tol,
            gamma=float(lam) - 1, scale=2.0,
        )
        if strict and not res.converged:
            raise DomainError("norm quadrature did not converge")
        return float(res.value)
    lam1, lam2 = f.weights
    e1 = 2.0 - 2.0 * float(lam1)
    e2 = 2.0 - 2.0 * float(lam2)

    def g(x, y):
        return abs(f.func(x, y)) ** 2 * x**e1 * y**e2 * math.exp(2 * (x + y))

    res = integrate_region(
        _guarded(g),
        [("laguerre", float(lam1) - 1, 2.0), ("laguerre", float(lam2) - 1, 2.0)],
        tol=tol,
    )
    if strict and not res.converged:
        raise DomainError("norm quadrature did not converge")
    return float(res.value)


def weighted_inner(f: L2Fn, g: L2Fn, tol: float = 1e-10, strict: bool = True):
    """Weighted inner product <f, g>, conjugate-linear in g; both arguments
    must declare the same weights."""
    if not isinstance(f, L2Fn) or not isinstance(g, L2Fn):
        raise DomainError("weighted_inner needs declared-weight functions")
    if f.weights != g.weights:
        raise DomainError("weighted_inner needs matching weights")
    if f.arity == 1:
        lam = f.weights[0]
        expo = 2.0 - 2.0 * float(lam)

        def prod(z):
            return f.func(z) * complex(g.func(z)).conjugate() * z**expo * math.exp(2 * z)

        res = integrate_adaptive(
            _guarded(prod), "laguerre", tol=tol, gamma=float(lam) - 1, scale=2.0
        )
    else:
        lam1, lam2 = f.weights
        e1 = 2.0 - 2.0 * float(lam1)
        e2 = 2.0 - 2.0 * float(lam2)

        def prod2(x, y):
            return (
                f.func(x, y)
                * complex(g.func(x, y)).conjugate()
                * x**e1
                * y**e2
                * math.exp(2 * (x + y))
            )

        res = integrate_region(
            _guarded(prod2),
            [("laguerre", float(lam1) - 1, 2.0), ("laguerre", float(lam2) - 1, 2.0)],
            tol=tol,
        )
    if strict and not res.converged:
        raise DomainError("inner-product quadrature did not converge")
    return res.value


# ---------------------------------------------------------------------------
# Fourier-Laplace bridge


def fourier_laplace(F, zeta, tol: float = 1e-10, strict: bool = True, zmax: float = 40.0):
    """Boundary transform integral of F(z) e^(i zeta z) over (0, inf) for
    zeta in the upper half plane.

    The half line is truncated at zmax and split into geometrically growing
    panels, the smallest at the origin so fractional-power behavior of F is
    resolved; F must be negligible past zmax.
    """
    if complex(zeta).imag <= 0:
        raise DomainError("fourier_laplace needs Im zeta > 0")
    fn = _as_callable(F)

    def g(z):
        return fn(z) * cmath.exp(1j * zeta * z)

    res = integrate_region(
        g,
        [("panels", geometric_panels(0.0, zmax, first=1.0 / 64.0))],
        tol=tol,
        start_order=16,
        max_order=128,
    )
    if strict and not res.converged:
        raise DomainError("fourier_laplace quadrature did not converge")
    return res.value


def halfplane_norm_sq(
    G,
    lam,
    xmax: float = 60.0,
    ymax: float = 60.0,
    tol: float = 1e-7,
) -> float:
    """Truncated squared norm of a half-plane function against the weight
    (Im zeta)^(lam-2): panels cover |Re zeta| <= xmax, 0 < Im zeta <= ymax.
    Truncation error falls with the decay of G, so xmax/ymax set the floor."""
    if not float(lam) > 1:
        raise DomainError("halfplane_norm_sq needs lam > 1")
    fn = _as_callable(G)
    expo = float(lam) - 2

    def density(xi, eta):
        return abs(fn(complex(xi, eta))) ** 2 * eta**expo

    right = geometric_panels(0.0, xmax, first=1.0)
    xi_panels = [(-b, -a) for a, b in reversed(right)] + right
    eta_panels = geometric_panels(0.0, ymax, first=0.5)
    res = integrate_region(
        density,
        [("panels", xi_panels), ("panels", eta_panels)],
        tol=tol,
        start_order=8,
        max_order=32,
    )
    return float(res.value)
