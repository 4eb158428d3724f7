#!/usr/bin/env python3
"""Decompose a product of powers and rebuild it level by level.

The function (z1+i)^(-7/3) (z2+i)^(-5/2) is not a finite sum of levels, so
the reconstruction converges instead of terminating.  Each level is obtained
by applying the pairing, the rebuild sums the lifted components up to a
cutoff L, and the residual at a few tube points drops by one to two orders
of magnitude per level.
"""

from fractions import Fraction as F

from holobreak.rc_transform import RCParams, invert_rc, rc_apply
from holobreak.term_algebra import (
    base_poly,
    default_tube_points,
    evaluate,
    holo_sum,
    qqi,
    term,
)


def var_plus_i(arity, var):
    entries = {tuple(1 if k == var else 0 for k in range(arity)): 1}
    entries[(0,) * arity] = qqi(0, 1)
    return base_poly(arity, entries)


def main() -> None:
    lam1 = lam2 = F(2)
    f = holo_sum(
        2,
        [term(2, 1, (0, 0),
              [(var_plus_i(2, 0), F(-7, 3)), (var_plus_i(2, 1), F(-5, 2))])],
    )
    comps = {}
    for ell in range(9):
        g = rc_apply(RCParams(lam1, lam2, ell), f)
        comps[ell] = lambda z, g=g: evaluate(g, (z,))

    points = default_tube_points(2)[:3]
    values = [evaluate(f, pt) for pt in points]
    print("max relative residual over three tube points:")
    for L in range(9):
        rec = invert_rc(lam1, lam2, comps, L=L)
        residual = max(
            abs(rec(z1, z2) - v) / abs(v) for (z1, z2), v in zip(points, values)
        )
        print(f"  L={L}: {residual:.3e}")


if __name__ == "__main__":
    main()
