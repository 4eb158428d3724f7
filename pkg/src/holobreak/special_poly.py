"""Scalar special functions and the classical polynomial families.

Everything downstream leans on this module twice over: once for floating
point evaluation (Lanczos gamma, norm constants) and once for exact rational
arithmetic (Pochhammer products, polynomial coefficient tables built from
`fractions.Fraction`).  A function that receives exact input returns exact
output wherever the value is rational; otherwise it degrades to float or
complex without complaint.

Polynomial containers are deliberately small: dense coefficients in one
variable, a sparse exponent map in two.  They support just enough arithmetic
to state residual identities (ODE checks, homogeneity) in tests.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction


class DomainError(ValueError):
    """Parameter outside the domain a formula is valid on."""


class PoleError(DomainError):
    """Evaluation requested at a pole."""


# ---------------------------------------------------------------------------
# scalar helpers


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def as_integer(x):
    """Return the value as an int when it is integral, else None."""
    if isinstance(x, bool):
        return None
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else None
    if isinstance(x, float):
        return int(x) if x.is_integer() else None
    if isinstance(x, complex):
        if x.imag == 0.0 and x.real.is_integer():
            return int(x.real)
        return None
    return None


def pochhammer(x, k: int):
    """Rising factorial x(x+1)...(x+k-1); exact when x is exact."""
    if k < 0 or k != int(k):
        raise DomainError(f"pochhammer needs k in N, got {k!r}")
    out = Fraction(1) if is_exact(x) else 1.0
    for j in range(int(k)):
        out = out * (x + j)
    return out


_LANCZOS = (
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos_gamma(z: complex) -> complex:
    if z.real < 0.5:
        # reflection keeps the series argument in the stable half plane
        return math.pi / (cmath.sin(math.pi * z) * _lanczos_gamma(1.0 - z))
    z = z - 1.0
    x = 0.99999999999980993
    for i, c in enumerate(_LANCZOS):
        x += c / (z + i + 1)
    t = z + len(_LANCZOS) - 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


def complex_gamma(z):
    """Gamma function on C; raises PoleError at non-positive integers.

    Real positive arguments go through math.gamma for full double precision;
    everything else uses a Lanczos evaluation with reflection.
    """
    n = as_integer(z)
    if n is not None and n <= 0:
        raise PoleError(f"gamma pole at {z!r}")
    if isinstance(z, (int, Fraction)):
        z = float(z)
    if isinstance(z, float):
        if z > 0:
            return math.gamma(z)
        return math.pi / (math.sin(math.pi * z) * math.gamma(1.0 - z))
    return _lanczos_gamma(complex(z))


def reciprocal_gamma(z):
    """1/Gamma(z), returning exactly 0.0 at the poles of Gamma."""
    n = as_integer(z)
    if n is not None and n <= 0:
        return 0.0
    return 1.0 / complex_gamma(z)


def beta(a, b):
    """Euler beta via reciprocal gamma, surviving pole cancellation.

    When a (or b) sits at a pole of Gamma while a+b does too, the quotient
    Gamma(a)/Gamma(a+b) has a finite limit reached through the reflection
    formula; that limit is returned.  An uncancelled pole raises.
    """
    na = as_integer(a)
    nb = as_integer(b)
    nab = as_integer(a + b)
    pa = na is not None and na <= 0
    pb = nb is not None and nb <= 0
    pab = nab is not None and nab <= 0
    if pa and pb:
        raise PoleError(f"beta({a!r}, {b!r}): double pole")
    if pa or pb:
        if not pab:
            raise PoleError(f"beta({a!r}, {b!r}): uncancelled pole")
        if pb:
            a, b = b, a
            na = nb
        # a = -m, a + b = -p with b a positive integer:
        # lim Gamma(a+e)/Gamma(a+b+e) = (-1)^b (1-a-b)...(−a) = (-1)^b p!/m!
        m = -na
        p = -nab
        bi = as_integer(b)
        return (-1) ** bi * math.factorial(bi - 1) * Fraction(
            math.factorial(p), math.factorial(m)
        )
    return complex_gamma(a) * complex_gamma(b) * reciprocal_gamma(a + b)


# ---------------------------------------------------------------------------
# polynomial containers


def _strip(coeffs):
    cs = list(coeffs)
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    if not cs:
        cs = [0]
    return tuple(cs)


@dataclass(frozen=True)
class PolyOneVar:
    """Dense univariate polynomial, coefficients low degree first.

    Normalization strips exact zero leading coefficients, so a family whose
    top coefficient collapses at special parameter values simply reports a
    smaller degree.  The zero polynomial is (0,) with degree 0.
    """

    coefficients: tuple

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, t):
        out = 0
        for c in reversed(self.coefficients):
            out = out * t + c
        return out

    def derivative(self) -> "PolyOneVar":
        cs = [k * c for k, c in enumerate(self.coefficients)][1:]
        return poly_one(cs)

    def __add__(self, other: "PolyOneVar") -> "PolyOneVar":
        n = max(len(self.coefficients), len(other.coefficients))
        cs = [0] * n
        for i, c in enumerate(self.coefficients):
            cs[i] = cs[i] + c
        for i, c in enumerate(other.coefficients):
            cs[i] = cs[i] + c
        return poly_one(cs)

    def __sub__(self, other: "PolyOneVar") -> "PolyOneVar":
        return self + (-1) * other

    def __mul__(self, other):
        if isinstance(other, PolyOneVar):
            cs = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
            for i, a in enumerate(self.coefficients):
                for j, b in enumerate(other.coefficients):
                    cs[i + j] = cs[i + j] + a * b
            return poly_one(cs)
        return poly_one([other * c for c in self.coefficients])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)


def poly_one(coeffs) -> PolyOneVar:
    return PolyOneVar(_strip(coeffs))


@dataclass(frozen=True)
class PolyTwoVar:
    """Sparse bivariate polynomial as a sorted ((i, j), coeff) table."""

    coefficients: tuple

    def items(self):
        return self.coefficients

    def coeff(self, i: int, j: int):
        for (a, b), c in self.coefficients:
            if (a, b) == (i, j):
                return c
        return 0

    def __call__(self, x, y):
        out = 0
        for (i, j), c in self.coefficients:
            out = out + c * x**i * y**j
        return out

    def total_degrees(self):
        return sorted({i + j for (i, j), _ in self.coefficients})

    def is_homogeneous(self, degree: int) -> bool:
        return self.total_degrees() in ([], [degree])

    def __add__(self, other: "PolyTwoVar") -> "PolyTwoVar":
        m = dict(self.coefficients)
        for key, c in other.coefficients:
            m[key] = m.get(key, 0) + c
        return poly_two(m)

    def __mul__(self, scalar):
        return poly_two({key: scalar * c for key, c in self.coefficients})

    __rmul__ = __mul__

    def __sub__(self, other: "PolyTwoVar") -> "PolyTwoVar":
        return self + (-1) * other

    def is_zero(self) -> bool:
        return not self.coefficients


def poly_two(mapping) -> PolyTwoVar:
    items = tuple(sorted((k, v) for k, v in dict(mapping).items() if v != 0))
    return PolyTwoVar(items)


# ---------------------------------------------------------------------------
# Jacobi family


def jacobi_poly(ell: int, alpha, beta_) -> PolyOneVar:
    """Degree-ell Jacobi polynomial for the weight pair (alpha, beta_).

    Coefficients follow the explicit hypergeometric sum in powers of
    (t-1)/2, expanded into the monomial basis.  Exact parameters give exact
    coefficients.
    """
    if ell < 0:
        raise DomainError("jacobi_poly needs ell >= 0")
    exact = is_exact(alpha) and is_exact(beta_)
    coeffs = [Fraction(0) if exact else 0.0] * (ell + 1)
    for j in range(ell + 1):
        num = pochhammer(alpha + beta_ + ell + 1, j) * pochhammer(
            alpha + j + 1, ell - j
        )
        den = math.factorial(j) * math.factorial(ell - j) * 2**j
        term = num / den if exact else num / den
        # ((t-1)/2)^j contributes C(j, m) (-1)^(j-m) t^m / 2^j, folded above
        for m in range(j + 1):
            coeffs[m] = coeffs[m] + term * math.comb(j, m) * (-1) ** (j - m)
    return poly_one(coeffs)


def jacobi_inflated(ell: int, alpha, beta_) -> PolyTwoVar:
    """Homogeneous degree-ell inflation of the Jacobi polynomial.

    Satisfies inflated(x, y) = (-1)^ell (x+y)^ell P((y-x)/(x+y)) off the
    line x + y = 0.
    """
    m: dict = {}
    for j in range(ell + 1):
        num = pochhammer(alpha + beta_ + ell + 1, j) * pochhammer(
            alpha + j + 1, ell - j
        )
        a_j = (-1) ** (ell - j) * num / (
            math.factorial(ell - j) * math.factorial(j)
        )
        for k in range(ell - j + 1):
            key = (j + k, ell - j - k)
            m[key] = m.get(key, 0) + a_j * math.comb(ell - j, k)
    return poly_two(m)


def jacobi_variant(ell: int, alpha, beta_) -> PolyTwoVar:
    """Homogenization y^ell P(1 + 2x/y) of the Jacobi polynomial."""
    m: dict = {}
    for j in range(ell + 1):
        num = pochhammer(alpha + beta_ + ell + 1, j) * pochhammer(
            alpha + j + 1, ell - j
        )
        m[(j, ell - j)] = num / (math.factorial(ell - j) * math.factorial(j))
    return poly_two(m)


def jacobi_norm_sq(ell: int, alpha, beta_):
    """L2 norm squared of the Jacobi polynomial against its own weight
    (1-t)^alpha (1+t)^beta on (-1, 1); needs real alpha, beta > -1."""
    if isinstance(alpha, complex) or isinstance(beta_, complex):
        raise DomainError("jacobi_norm_sq needs real parameters")
    a = float(alpha)
    b = float(beta_)
    if a <= -1 or b <= -1:
        raise DomainError("jacobi_norm_sq needs alpha, beta > -1")
    if ell == 0:
        # the generic denominator hits Gamma(a+b+1) which may sit at a pole;
        # the (a+b+1) prefactor absorbs it
        return 2.0 ** (a + b + 1) * complex_gamma(a + 1) * complex_gamma(
            b + 1
        ) * reciprocal_gamma(a + b + 2)
    num = 2.0 ** (a + b + 1) * complex_gamma(ell + a + 1) * complex_gamma(ell + b + 1)
    den = (2 * ell + a + b + 1) * complex_gamma(ell + a + b + 1) * math.factorial(ell)
    return num / den


def d_ell_weight(ell: int, alpha, beta_):
    """Reciprocal Jacobi norm: the expansion weight of the Jacobi transform."""
    return 1.0 / jacobi_norm_sq(ell, alpha, beta_)


# ---------------------------------------------------------------------------
# Gegenbauer family


def gegenbauer_a(ell: int, k: int, alpha):
    """Monomial coefficient a_k of the Gegenbauer polynomial.

    a_k(ell, alpha) = (-1)^k 2^(ell-2k) (alpha)_(ell-k) / (k! (ell-2k)!),
    defined for 2k <= ell.
    """
    if not 0 <= 2 * k <= ell:
        raise DomainError(f"gegenbauer_a needs 0 <= 2k <= ell, got k={k}, ell={ell}")
    num = (-1) ** k * 2 ** (ell - 2 * k) * pochhammer(alpha, ell - k)
    return num / (math.factorial(k) * math.factorial(ell - 2 * k))


def gegenbauer_poly(ell: int, alpha) -> PolyOneVar:
    """Degree-ell Gegenbauer polynomial with parameter alpha."""
    coeffs = [0] * (ell + 1)
    for k in range(ell // 2 + 1):
        coeffs[ell - 2 * k] = gegenbauer_a(ell, k, alpha)
    return poly_one(coeffs)


def gegenbauer_inflated(ell: int, alpha) -> PolyTwoVar:
    """Two-variable form sum_k a_k u^k v^(ell-2k).

    Substituting u = w^2 recovers w^ell C(v/w); each monomial has
    2*(u-degree) + (v-degree) = ell.
    """
    m = {}
    for k in range(ell // 2 + 1):
        m[(k, ell - 2 * k)] = gegenbauer_a(ell, k, alpha)
    return poly_two(m)


def gegenbauer_norm_sq(ell: int, alpha):
    """L2 norm squared against (1-v^2)^(alpha-1/2) on (-1, 1); alpha > -1/2."""
    a = float(alpha)
    if isinstance(alpha, complex):
        raise DomainError("gegenbauer_norm_sq needs a real parameter")
    if a <= -0.5:
        raise DomainError("gegenbauer_norm_sq needs alpha > -1/2")
    if a == 0.0:
        # removable limit: the family itself degenerates
        return math.pi if ell == 0 else 0.0
    num = math.pi * 2.0 ** (1 - 2 * a) * complex_gamma(ell + 2 * a)
    den = math.factorial(ell) * (ell + a) * complex_gamma(a) ** 2
    return num / den
