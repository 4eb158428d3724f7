"""Exact symbolic terms for the transform calculus.

A term is ``coefficient * monomial * product of base powers`` where each base
is a polynomial of degree at most two with exact Gaussian-rational
coefficients, raised to an exponent that may be an exact rational or an
arbitrary complex number.  Sums of terms are closed under exactly the
operations the transforms need -- differentiation, restriction to a
hyperplane or the diagonal, pointwise evaluation, the sl2 actions -- and
nothing else: there is deliberately no general term-times-term product.

Two equality modes are provided.  Exact mode decides equality of sums with
rational data by canonicalizing the difference: within each base, exponents
that differ by integers are rewritten over the minimal one, every positive
integer power is expanded into monomials, and the result must vanish
identically.  Sampled mode compares values at a fixed pseudo-random set of
tube-domain points.

The textual s-expression format round-trips exact sums; see
docs/holosum-format.md for the grammar.
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .special_poly import DomainError, PoleError, is_exact


class SingularRestrictionError(ValueError):
    """Restriction made a base vanish under a non-positive-integer power."""


class BranchCutError(ValueError):
    """Evaluation hit a power within 1e-10 of the principal branch cut."""


class ExactnessError(ValueError):
    """Exact-mode operation received non-rational data."""


# ---------------------------------------------------------------------------
# scalars: exact Gaussian rationals, degrading to complex


@dataclass(frozen=True)
class QQi:
    """Gaussian rational re + im*i with Fraction parts."""

    re: Fraction
    im: Fraction

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> "QQi":
        return QQi(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0


def qqi(re, im=0) -> QQi:
    return QQi(Fraction(re), Fraction(im))


QQI_ONE = qqi(1)
QQI_I = qqi(0, 1)


def exactify(x):
    """Coerce to QQi when exactly representable, else None."""
    if isinstance(x, QQi):
        return x
    if is_exact(x):
        return QQi(Fraction(x), Fraction(0))
    return None


def s_add(a, b):
    ea, eb = exactify(a), exactify(b)
    if ea is not None and eb is not None:
        return QQi(ea.re + eb.re, ea.im + eb.im)
    return s_to_complex(a) + s_to_complex(b)


def s_mul(a, b):
    ea, eb = exactify(a), exactify(b)
    if ea is not None and eb is not None:
        return QQi(ea.re * eb.re - ea.im * eb.im, ea.re * eb.im + ea.im * eb.re)
    return s_to_complex(a) * s_to_complex(b)


def s_neg(a):
    ea = exactify(a)
    if ea is not None:
        return QQi(-ea.re, -ea.im)
    return -s_to_complex(a)


def s_inv(a):
    ea = exactify(a)
    if ea is not None:
        n = ea.re * ea.re + ea.im * ea.im
        if n == 0:
            raise ZeroDivisionError("inverse of exact zero")
        return QQi(ea.re / n, -ea.im / n)
    return 1.0 / s_to_complex(a)


def s_pow_int(a, n: int):
    if n == 0:
        return QQI_ONE
    base = a if n > 0 else s_inv(a)
    out = QQI_ONE
    for _ in range(abs(n)):
        out = s_mul(out, base)
    return out


def s_is_zero(a) -> bool:
    ea = exactify(a)
    if ea is not None:
        return ea.is_zero()
    return s_to_complex(a) == 0


def s_to_complex(a) -> complex:
    if isinstance(a, QQi):
        return complex(a)
    return complex(a)


# exponents: Fraction when exact, complex/float otherwise


def e_coerce(p):
    if isinstance(p, Fraction):
        return p
    if is_exact(p):
        return Fraction(p)
    if isinstance(p, (float, complex)):
        return complex(p)
    raise TypeError(f"bad exponent {p!r}")


def e_add(p, q):
    if isinstance(p, Fraction) and isinstance(q, Fraction):
        return p + q
    return complex(p) + complex(q)


def e_is_zero(p) -> bool:
    return p == 0


def e_key(p):
    if isinstance(p, Fraction):
        return ("F", p.numerator, p.denominator)
    return ("C", p.real, p.imag)


# ---------------------------------------------------------------------------
# base polynomials (degree <= 2, exact coefficients), interned


@dataclass(frozen=True)
class BasePoly:
    """Exact polynomial of degree <= 2 in `arity` variables."""

    arity: int
    entries: tuple  # sorted ((e1, ..., en), QQi) pairs

    def degree(self) -> int:
        return max((sum(e) for e, _ in self.entries), default=0)

    def evaluate(self, point) -> complex:
        out = 0j
        for e, c in self.entries:
            v = s_to_complex(c)
            for z, k in zip(point, e):
                if k:
                    v = v * complex(z) ** k
            out += v
        return out

    def differentiate(self, var: int):
        """Return the derivative as a (possibly empty) entry mapping."""
        m: dict = {}
        for e, c in self.entries:
            if e[var] == 0:
                continue
            ne = e[:var] + (e[var] - 1,) + e[var + 1 :]
            m[ne] = s_add(m.get(ne, qqi(0)), s_mul(c, e[var]))
        return {k: v for k, v in m.items() if not s_is_zero(v)}

    def substitute_last_zero(self):
        """Set the last variable to zero; returns ('zero'|'const'|'poly', payload)."""
        m: dict = {}
        for e, c in self.entries:
            if e[-1] != 0:
                continue
            m[e[:-1]] = c
        return _classify_entries(self.arity - 1, m)

    def substitute_diagonal(self):
        """Identify the two variables of an arity-2 base."""
        if self.arity != 2:
            raise DomainError("diagonal substitution needs arity 2")
        m: dict = {}
        for (i, j), c in self.entries:
            key = (i + j,)
            m[key] = s_add(m.get(key, qqi(0)), c)
        m = {k: v for k, v in m.items() if not s_is_zero(v)}
        return _classify_entries(1, m)


def _classify_entries(arity: int, mapping: dict):
    mapping = {k: v for k, v in mapping.items() if not s_is_zero(v)}
    if not mapping:
        return ("zero", None)
    if set(mapping) == {(0,) * arity}:
        return ("const", mapping[(0,) * arity])
    return ("poly", base_poly(arity, mapping))


_REGISTRY: dict = {}


def base_poly(arity: int, mapping) -> BasePoly:
    """Intern an exact degree-<=2 polynomial as a base.

    The registry is append-only: the first construction of a given
    (arity, entries) key wins and every later request returns it.
    """
    entries = []
    for e, c in dict(mapping).items():
        e = tuple(int(k) for k in e)
        if len(e) != arity or any(k < 0 for k in e):
            raise DomainError(f"bad base monomial {e!r} for arity {arity}")
        if sum(e) > 2:
            raise DomainError("base polynomials are limited to degree 2")
        ec = exactify(c)
        if ec is None:
            raise ExactnessError(f"base coefficient {c!r} is not exact")
        if not ec.is_zero():
            entries.append((e, ec))
    entries = tuple(sorted(entries))
    if not entries:
        raise DomainError("the zero polynomial cannot be a base")
    key = (arity, entries)
    if key not in _REGISTRY:
        _REGISTRY[key] = BasePoly(arity, entries)
    return _REGISTRY[key]


def registered_bases() -> tuple:
    return tuple(_REGISTRY.values())


def _is_single_monomial(b: BasePoly) -> bool:
    return len(b.entries) == 1


# ---------------------------------------------------------------------------
# terms and sums


@dataclass(frozen=True)
class HoloTerm:
    coefficient: object  # QQi or complex
    monomial: tuple
    bases: tuple  # sorted ((BasePoly, exponent), ...), unique bases

    def arity(self) -> int:
        return len(self.monomial)


@dataclass(frozen=True)
class HoloSum:
    arity: int
    terms: tuple

    def is_zero(self) -> bool:
        return not self.terms


def _base_sort_key(b: BasePoly):
    return (b.arity, tuple((e, (c.re, c.im)) for e, c in b.entries))


def term(arity: int, coefficient, monomial=None, bases=()) -> HoloTerm:
    """Normalize one term: merge duplicate bases, fold monomial bases.

    A base that is a single monomial raised to a positive integer power is
    folded into the term monomial; a constant base folds into the
    coefficient.  Exponent-zero factors drop.
    """
    coeff = exactify(coefficient)
    if coeff is None:
        coeff = s_to_complex(coefficient)
    mono = tuple(int(m) for m in (monomial or (0,) * arity))
    if len(mono) != arity or any(m < 0 for m in mono):
        raise DomainError(f"bad monomial {mono!r}")
    merged: dict = {}
    for b, p in bases:
        if b.arity != arity:
            raise DomainError("base arity mismatch")
        p = e_coerce(p)
        if id(b) not in merged:
            merged[id(b)] = [b, p]
        else:
            merged[id(b)][1] = e_add(merged[id(b)][1], p)
    out_bases = []
    for b, p in merged.values():
        if e_is_zero(p):
            continue
        if _is_single_monomial(b):
            e, c = b.entries[0]
            if isinstance(p, Fraction) and p.denominator == 1 and p > 0:
                n = int(p)
                coeff = s_mul(coeff, s_pow_int(c, n))
                mono = tuple(m + n * ei for m, ei in zip(mono, e))
                continue
            if sum(e) == 0:
                # constant base under an arbitrary exponent
                if isinstance(p, Fraction) and p.denominator == 1:
                    coeff = s_mul(coeff, s_pow_int(c, int(p)))
                else:
                    coeff = s_mul(coeff, _principal_power(s_to_complex(c), p))
                continue
        out_bases.append((b, p))
    out_bases.sort(key=lambda bp: (_base_sort_key(bp[0]), e_key(bp[1])))
    return HoloTerm(coeff, mono, tuple(out_bases))


def _sig(t: HoloTerm):
    return (t.monomial, tuple((_base_sort_key(b), e_key(p)) for b, p in t.bases))


def holo_sum(arity: int, terms: Iterable[HoloTerm]) -> HoloSum:
    acc: dict = {}
    keep: dict = {}
    for t in terms:
        if len(t.monomial) != arity:
            raise DomainError("term arity mismatch")
        k = _sig(t)
        if k in acc:
            acc[k] = s_add(acc[k], t.coefficient)
        else:
            acc[k] = t.coefficient
            keep[k] = t
    out = []
    for k, c in acc.items():
        if s_is_zero(c):
            continue
        t = keep[k]
        out.append(HoloTerm(c, t.monomial, t.bases))
    out.sort(key=lambda t: _sig(t))
    return HoloSum(arity, tuple(out))


def constant(arity: int, c) -> HoloSum:
    return holo_sum(arity, [term(arity, c)])


def monomial(arity: int, exponents, c=1) -> HoloSum:
    return holo_sum(arity, [term(arity, c, exponents)])


def add(f: HoloSum, g: HoloSum) -> HoloSum:
    if f.arity != g.arity:
        raise DomainError("arity mismatch in add")
    return holo_sum(f.arity, list(f.terms) + list(g.terms))


def scale(f: HoloSum, s) -> HoloSum:
    return holo_sum(
        f.arity,
        [term(f.arity, s_mul(t.coefficient, s), t.monomial, t.bases) for t in f.terms],
    )


def sub(f: HoloSum, g: HoloSum) -> HoloSum:
    return add(f, scale(g, qqi(-1)))


def multiply_expanded(f: HoloSum, mapping) -> HoloSum:
    """Multiply by an explicit exponent->coefficient polynomial.

    This is the only sanctioned product: the multiplier arrives already
    expanded into monomials, so the result stays in normal term shape.
    """
    out = []
    for e, c in dict(mapping).items():
        e = tuple(int(k) for k in e)
        for t in f.terms:
            mono = tuple(m + k for m, k in zip(t.monomial, e))
            out.append(term(f.arity, s_mul(t.coefficient, c), mono, t.bases))
    return holo_sum(f.arity, out)


def differentiate(f: HoloSum, var: int, times: int = 1) -> HoloSum:
    """Partial derivative in variable `var` (0-indexed), `times` times."""
    if not 0 <= var < f.arity:
        raise DomainError(f"variable {var} out of range")
    cur = f
    for _ in range(times):
        out = []
        for t in cur.terms:
            m = t.monomial[var]
            if m:
                mono = t.monomial[:var] + (m - 1,) + t.monomial[var + 1 :]
                out.append(term(cur.arity, s_mul(t.coefficient, m), mono, t.bases))
            for i, (b, p) in enumerate(t.bases):
                db = b.differentiate(var)
                if not db:
                    continue
                rest = t.bases[:i] + t.bases[i + 1 :]
                new_p = e_add(p, Fraction(-1))
                newbases = rest if e_is_zero(new_p) else rest + ((b, new_p),)
                for e, c in db.items():
                    mono = tuple(mm + ee for mm, ee in zip(t.monomial, e))
                    out.append(
                        term(
                            cur.arity,
                            s_mul(s_mul(t.coefficient, p), c),
                            mono,
                            newbases,
                        )
                    )
        cur = holo_sum(cur.arity, out)
    return cur


def _exp_is_pos_int(p) -> bool:
    return isinstance(p, Fraction) and p.denominator == 1 and p > 0


def restrict(f: HoloSum, kind: str) -> HoloSum:
    """Restrict to a boundary: kind 'last-zero' sets the final variable to
    zero (arity drops by one), kind 'diagonal' identifies the two variables
    of an arity-2 sum (arity drops to one).

    A base that vanishes identically under the substitution kills its term
    when its exponent is a positive integer and raises
    SingularRestrictionError otherwise.
    """
    if kind == "last-zero":
        if f.arity < 1:
            raise DomainError("nothing to restrict")
        new_arity = f.arity - 1
    elif kind == "diagonal":
        if f.arity != 2:
            raise DomainError("diagonal restriction needs arity 2")
        new_arity = 1
    else:
        raise DomainError(f"unknown restriction {kind!r}")

    out = []
    for t in f.terms:
        if kind == "last-zero":
            if t.monomial[-1] > 0:
                continue
            mono = t.monomial[:-1]
        else:
            mono = (t.monomial[0] + t.monomial[1],)
        coeff = t.coefficient
        newbases = []
        dead = False
        for b, p in t.bases:
            tag, payload = (
                b.substitute_last_zero()
                if kind == "last-zero"
                else b.substitute_diagonal()
            )
            if tag == "zero":
                if _exp_is_pos_int(p):
                    dead = True
                    break
                raise SingularRestrictionError(
                    f"base vanishes under {kind} with exponent {p!r}"
                )
            if tag == "const":
                if isinstance(p, Fraction) and p.denominator == 1:
                    coeff = s_mul(coeff, s_pow_int(payload, int(p)))
                else:
                    coeff = s_mul(
                        coeff, _principal_power(s_to_complex(payload), p)
                    )
                continue
            newbases.append((payload, p))
        if dead:
            continue
        out.append(term(new_arity, coeff, mono, newbases))
    return holo_sum(new_arity, out)


# ---------------------------------------------------------------------------
# evaluation


def _principal_power(b: complex, p) -> complex:
    if isinstance(p, Fraction) and p.denominator == 1:
        n = int(p)
        if b == 0:
            if n > 0:
                return 0j
            raise PoleError("zero base under non-positive integer power")
        return b**n
    pe = float(p) if isinstance(p, Fraction) else complex(p)
    if b == 0:
        re = pe if isinstance(pe, float) else pe.real
        if re > 0:
            return 0j
        raise PoleError("zero base under non-positive-real-part power")
    if abs(abs(cmath.phase(b)) - math.pi) < 1e-10:
        raise BranchCutError(
            f"argument of {b!r} within 1e-10 of the principal cut"
        )
    return b**pe


def evaluate(f: HoloSum, point) -> complex:
    """Evaluate at a point, principal branch for every non-integer power.

    Raises BranchCutError when a base value falls within 1e-10 of the
    negative real axis under a non-integer exponent: on tube domains that
    signals an ill-posed branch choice rather than a numeric accident.
    """
    if len(point) != f.arity:
        raise DomainError("point arity mismatch")
    pt = tuple(complex(z) for z in point)
    total = 0j
    for t in f.terms:
        v = s_to_complex(t.coefficient)
        for z, m in zip(pt, t.monomial):
            if m:
                v = v * z**m
        for b, p in t.bases:
            v = v * _principal_power(b.evaluate(pt), p)
        total += v
    return total


# ---------------------------------------------------------------------------
# equality


def _require_exact(f: HoloSum):
    for t in f.terms:
        if exactify(t.coefficient) is None:
            raise ExactnessError(f"coefficient {t.coefficient!r} is not exact")
        for _, p in t.bases:
            if not isinstance(p, Fraction):
                raise ExactnessError(f"exponent {p!r} is not exact")


def _expand_base_power(b: BasePoly, n: int) -> dict:
    """Entries of b**n as an exponent->QQi mapping (n >= 0)."""
    acc = {(0,) * b.arity: QQI_ONE}
    for _ in range(n):
        nxt: dict = {}
        for e1, c1 in acc.items():
            for e2, c2 in b.entries:
                e = tuple(a + bb for a, bb in zip(e1, e2))
                prev = nxt.get(e)
                v = s_mul(c1, c2)
                nxt[e] = v if prev is None else s_add(prev, v)
        acc = {k: v for k, v in nxt.items() if not s_is_zero(v)}
    return acc


def canonical_form(f: HoloSum) -> dict:
    """Canonical dict of an exact sum; empty dict iff f is identically zero
    off the union of base zero sets.

    Within each base, exponents in the same integer-difference class are
    rewritten over the minimal one (terms lacking the base join the integer
    class at exponent zero when the class minimum is negative), and the
    integer surplus is expanded into monomials.
    """
    _require_exact(f)
    # collect integer-class minima per base; integer classes are capped at
    # zero so that a sum of purely positive powers expands completely
    minima: dict = {}  # (base key, frac part) -> min exponent
    base_of: dict = {}
    for t in f.terms:
        for b, p in t.bases:
            frac = p - math.floor(p)
            key = (_base_sort_key(b), frac)
            base_of[key] = b
            if key not in minima or p < minima[key]:
                minima[key] = p
    for key in list(minima):
        if key[1] == 0 and minima[key] > 0:
            minima[key] = Fraction(0)
    # integer classes with negative minima must also pull in base-free terms
    int_keys = {
        key: m for key, m in minima.items() if key[1] == 0 and m < 0
    }

    out: dict = {}
    for t in f.terms:
        present = {_base_sort_key(b) for b, _ in t.bases}
        residual = []
        expanders = []
        for b, p in t.bases:
            frac = p - math.floor(p)
            key = (_base_sort_key(b), frac)
            pmin = minima[key]
            surplus = p - pmin
            if not e_is_zero(pmin):
                residual.append((b, pmin))
            if surplus > 0:
                expanders.append((b, int(surplus)))
        for key, pmin in int_keys.items():
            bkey, _ = key
            if bkey in present:
                continue
            b = base_of[key]
            residual.append((b, pmin))
            expanders.append((b, int(-pmin)))
        residual.sort(key=lambda bp: (_base_sort_key(bp[0]), e_key(bp[1])))
        sig = tuple((_base_sort_key(b), e_key(p)) for b, p in residual)
        pieces = {t.monomial: exactify(t.coefficient)}
        for b, n in expanders:
            expanded = _expand_base_power(b, n)
            nxt: dict = {}
            for m1, c1 in pieces.items():
                for m2, c2 in expanded.items():
                    m = tuple(a + bb for a, bb in zip(m1, m2))
                    v = s_mul(c1, c2)
                    prev = nxt.get(m)
                    nxt[m] = v if prev is None else s_add(prev, v)
            pieces = nxt
        for m, c in pieces.items():
            k = (m, sig)
            prev = out.get(k)
            out[k] = c if prev is None else s_add(prev, c)
    return {k: v for k, v in out.items() if not s_is_zero(v)}


_SAMPLE_SEED = 20260822


def default_tube_points(arity: int, count: int = 20) -> list:
    """Fixed pseudo-random points with each coordinate in a safe tube strip."""
    rng = random.Random(_SAMPLE_SEED)
    pts = []
    for _ in range(count):
        pts.append(
            tuple(
                complex(rng.uniform(-0.7, 0.7), rng.uniform(0.4, 1.6))
                for _ in range(arity)
            )
        )
    return pts


def equal(
    f: HoloSum,
    g: HoloSum,
    mode: str = "exact",
    tol: float = 1e-9,
    points=None,
) -> bool:
    """Decide f == g either exactly or by sampling.

    Exact mode requires rational data and canonicalizes the difference.
    Sampled mode evaluates both sides at 20 fixed-seed tube points (or the
    points provided) and compares relative deviation against tol.
    """
    if f.arity != g.arity:
        raise DomainError("arity mismatch in equal")
    if mode == "exact":
        # guard the inputs, not just the difference: f - f cancels floats
        _require_exact(f)
        _require_exact(g)
        return not canonical_form(sub(f, g))
    if mode != "sampled":
        raise DomainError(f"unknown equality mode {mode!r}")
    pts = points if points is not None else default_tube_points(f.arity)
    for pt in pts:
        fv = evaluate(f, pt)
        gv = evaluate(g, pt)
        scale_ = max(abs(fv), abs(gv))
        if scale_ < 1e-14:
            continue
        if abs(fv - gv) / scale_ > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# sl2 actions


def _shift(f: HoloSum, exponents, coeff=1) -> HoloSum:
    return multiply_expanded(f, {tuple(exponents): coeff})


def sl2_action(generator: str, lam, f: HoloSum) -> HoloSum:
    """Infinitesimal action of one sl2 generator on a one-variable sum.

    H acts by -lam - 2 z d/dz, X by -d/dz, Y by lam z + z^2 d/dz; lam may
    be exact or complex.
    """
    if f.arity != 1:
        raise DomainError("sl2_action needs a one-variable sum")
    df = differentiate(f, 0)
    if generator == "H":
        return add(scale(f, s_neg(lam)), _shift(df, (1,), -2))
    if generator == "X":
        return scale(df, qqi(-1))
    if generator == "Y":
        return add(scale(_shift(f, (1,)), lam), _shift(df, (2,)))
    raise DomainError(f"unknown sl2 generator {generator!r}")


def casimir_sl2(lam, f: HoloSum) -> HoloSum:
    """(H^2 + 2XY + 2YX)/8 through sl2_action; scalar lam(lam-2)/8 on
    one-variable sums."""
    h2 = sl2_action("H", lam, sl2_action("H", lam, f))
    xy = sl2_action("X", lam, sl2_action("Y", lam, f))
    yx = sl2_action("Y", lam, sl2_action("X", lam, f))
    out = add(h2, add(scale(xy, 2), scale(yx, 2)))
    return scale(out, Fraction(1, 8))


def _diag_h(lam1, lam2, f: HoloSum) -> HoloSum:
    d1 = _shift(differentiate(f, 0), (1, 0), -2)
    d2 = _shift(differentiate(f, 1), (0, 1), -2)
    return add(scale(f, s_neg(s_add(lam1, lam2))), add(d1, d2))


def _diag_x(f: HoloSum) -> HoloSum:
    return scale(add(differentiate(f, 0), differentiate(f, 1)), qqi(-1))


def _diag_y(lam1, lam2, f: HoloSum) -> HoloSum:
    out = add(scale(_shift(f, (1, 0)), lam1), scale(_shift(f, (0, 1)), lam2))
    out = add(out, _shift(differentiate(f, 0), (2, 0)))
    return add(out, _shift(differentiate(f, 1), (0, 2)))


def sl2_action_pair(generator: str, lam1, lam2, f: HoloSum) -> HoloSum:
    """Diagonal tensor-product action of one sl2 generator on a two-variable
    sum, each slot carrying its own weight."""
    if f.arity != 2:
        raise DomainError("sl2_action_pair needs a two-variable sum")
    if generator == "H":
        return _diag_h(lam1, lam2, f)
    if generator == "X":
        return _diag_x(f)
    if generator == "Y":
        return _diag_y(lam1, lam2, f)
    raise DomainError(f"unknown sl2 generator {generator!r}")


def casimir_diag(lam1, lam2, f: HoloSum) -> HoloSum:
    """Diagonal Casimir action on a two-variable sum via the tensor-product
    generators."""
    if f.arity != 2:
        raise DomainError("casimir_diag needs a two-variable sum")
    h2 = _diag_h(lam1, lam2, _diag_h(lam1, lam2, f))
    xy = _diag_x(_diag_y(lam1, lam2, f))
    yx = _diag_y(lam1, lam2, _diag_x(f))
    out = add(h2, add(scale(xy, 2), scale(yx, 2)))
    return scale(out, Fraction(1, 8))


# ---------------------------------------------------------------------------
# textual format


def _scalar_text(c) -> str:
    e = exactify(c)
    if e is not None:
        if e.im == 0:
            return str(e.re)
        return f"(c {e.re} {e.im})"
    z = s_to_complex(c)
    if z.imag == 0.0:
        return _float_text(z.real)
    return f"(c {_float_text(z.real)} {_float_text(z.imag)})"


def _float_text(x: float) -> str:
    s = repr(float(x))
    if "." not in s and "e" not in s and "inf" not in s and "nan" not in s:
        s += ".0"
    return s


def _exp_text(p) -> str:
    if isinstance(p, Fraction):
        return str(p)
    return _scalar_text(p)


def to_text(f: HoloSum) -> str:
    parts = [f"(sum {f.arity}"]
    for t in f.terms:
        bits = [f"  (term {_scalar_text(t.coefficient)}"]
        bits.append("(mono " + " ".join(str(m) for m in t.monomial) + ")")
        for b, p in t.bases:
            bent = " ".join(
                "((" + " ".join(str(k) for k in e) + ") " + _scalar_text(c) + ")"
                for e, c in b.entries
            )
            bits.append(f"(pow (base {bent}) {_exp_text(p)})")
        parts.append(" ".join(bits) + ")")
    parts.append(")")
    return "\n".join(parts)


class _Tokens:
    def __init__(self, text: str):
        self.toks = text.replace("(", " ( ").replace(")", " ) ").split()
        self.pos = 0

    def peek(self):
        if self.pos >= len(self.toks):
            raise ValueError("unexpected end of input")
        return self.toks[self.pos]

    def take(self, expect=None):
        tok = self.peek()
        self.pos += 1
        if expect is not None and tok != expect:
            raise ValueError(f"expected {expect!r}, got {tok!r}")
        return tok

    def done(self) -> bool:
        return self.pos >= len(self.toks)


def _parse_number(tok: str):
    if "." in tok or "e" in tok or "E" in tok:
        return float(tok)
    return Fraction(tok)


def _parse_scalar(ts: _Tokens):
    if ts.peek() == "(":
        ts.take("(")
        ts.take("c")
        re = _parse_number(ts.take())
        im = _parse_number(ts.take())
        ts.take(")")
        if isinstance(re, Fraction) and isinstance(im, Fraction):
            return QQi(re, im)
        return complex(float(re), float(im))
    return _parse_number(ts.take())


def _parse_exponent(ts: _Tokens):
    v = _parse_scalar(ts)
    if isinstance(v, QQi):
        if v.im == 0:
            return v.re
        return complex(v)
    if isinstance(v, Fraction):
        return v
    return complex(v).real if complex(v).imag == 0 else complex(v)


def from_text(text: str) -> HoloSum:
    """Parse the s-expression format produced by to_text."""
    ts = _Tokens(text)
    ts.take("(")
    ts.take("sum")
    arity = int(ts.take())
    terms = []
    while ts.peek() != ")":
        ts.take("(")
        ts.take("term")
        coeff = _parse_scalar(ts)
        ts.take("(")
        ts.take("mono")
        mono = []
        while ts.peek() != ")":
            mono.append(int(ts.take()))
        ts.take(")")
        bases = []
        while ts.peek() != ")":
            ts.take("(")
            ts.take("pow")
            ts.take("(")
            ts.take("base")
            entries = {}
            while ts.peek() != ")":
                ts.take("(")
                ts.take("(")
                e = []
                while ts.peek() != ")":
                    e.append(int(ts.take()))
                ts.take(")")
                c = _parse_scalar(ts)
                ts.take(")")
                entries[tuple(e)] = c
            ts.take(")")
            p = _parse_exponent(ts)
            ts.take(")")
            bases.append((base_poly(arity, entries), p))
        ts.take(")")
        terms.append(term(arity, coeff, tuple(mono), bases))
    ts.take(")")
    if not ts.done():
        raise ValueError("trailing tokens after sum")
    return holo_sum(arity, terms)
