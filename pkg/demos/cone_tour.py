#!/usr/bin/env python3
"""Closed-form constants on the cone and the checks that tie them together."""

import math
from fractions import Fraction as F

from holobreak.juhl import (
    JuhlParams,
    bernstein_sato_verify,
    cone_constants,
    phi_cone_apply,
    juhl_hat_apply,
    phi_isometry_ratio,
    q_constant,
)
from holobreak.l2_model import i_power


def main() -> None:
    print("constants for n=3, lam=7/2:")
    for ell in range(4):
        p = JuhlParams(3, F(7, 2), ell)
        cc = cone_constants(p)
        _, higher = bernstein_sato_verify(p)
        assert not higher
        print(f"  ell={ell}: c_ell={cc['c_ell']:.6g}  r_ell={cc['r_ell']:.6g}  "
              f"q0={q_constant(3, ell, F(7, 2))}")

    # adjoint constant equals (-1)^ell * conj(kernel constant) * q constant
    p = JuhlParams(3, F(7, 2), 2)
    cc = cone_constants(p)
    lhs = cc["adjoint_const"]
    rhs = (-1) ** p.ell * cc["kernel_const"].conjugate() * complex(
        q_constant(3, p.ell, p.lam)
    )
    print(f"\nadjoint factorization at ell=2: |lhs-rhs| = {abs(lhs - rhs):.2e}")

    # the fiber transform undoes the fiber lift up to i^(-ell) * c_ell
    p = JuhlParams(3, 2.5, 1)
    h = lambda yp: 1.0 + 0.5 * yp[1] - 0.25 * yp[0]
    lift = phi_cone_apply(p, h)
    probe = (1.5, 0.4)
    got = juhl_hat_apply(p, lift, probe, method="jacobi")
    back = got / (i_power(-p.ell) * cone_constants(p)["c_ell"])
    print(f"round trip at ell=1: recovered {back:.12g}, direct {h(probe):.12g}")

    # norm ratio of lift to profile, against the closed form
    p = JuhlParams(3, 3.0, 1)
    ratio = phi_isometry_ratio(p, lambda y: math.exp(-y[0]), probe)
    print(f"isometry ratio at lam=3, ell=1: {ratio:.10g} "
          f"(closed form {cone_constants(p)['c_ell']:.10g})")


if __name__ == "__main__":
    main()
