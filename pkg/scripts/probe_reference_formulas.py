#!/usr/bin/env python3
"""Probe two previously published closed forms for the complex hyperbolic plane
against the exact operator, and report the outcome.

Probe 1: the five-term display of the operator.  As printed elsewhere, the
x-sector carries t^2/t^4 prefactors; the eigenvalue data (1/2, 1) forces t/t^2.
The probe counts basis elements on which each variant matches the operator.

Probe 2: a printed biharmonic candidate for the seed z^4.  The probe certifies
it by exact iteration; whatever the outcome, the construction this package
builds is certified independently (see the acceptance suite).
"""

import json
import sys
from fractions import Fraction

from polyharm import (
    MixedExpr,
    Polynomial,
    VarIndex,
    build_psi,
    catalog_short_name,
    parse,
    parse_polynomial,
    tau,
    tension_tree,
    verify,
)

X, Y, Z = VarIndex(1, 1), VarIndex(1, 2), VarIndex(2, 1)

REFERENCE_CANDIDATE = (
    "z^4*t^2*log(t)"
    " - 1/3*(x^2 + y^2)*z^2*t^3*(3*log(t) - 20)"
    " - 1/4*z^2*t^4*(2*log(t) - 1)"
    " + 1/96*((x^2 + y^2)^2 + 8*z^2)*t^4*(6*log(t) - 70)"
    " + 1/300*(x^2 + y^2)*t^5*(30*log(t) - 17)"
    " + 1/75*t^6*(5*log(t) - 2)"
)


def display_tau(e: MixedExpr, doubled: bool) -> MixedExpr:
    """t^2 e_tt - t e_t + T (e_xx + e_yy) + (T (x^2+y^2) + 4 T^2)/4 e_zz
    + T (x e_yz - y e_xz), with T = t^2 if doubled else t."""
    shift = 2 if doubled else 1
    x = MixedExpr.from_polynomial(Polynomial.variable(X))
    y = MixedExpr.from_polynomial(Polynomial.variable(Y))
    second = lambda u, v: e.partial(u).partial(v)
    out = e.d_dt().d_dt().mul_t_power(2) - e.d_dt().mul_t_power(1)
    out = out + (second(X, X) + second(Y, Y)).mul_t_power(shift)
    zz = second(Z, Z)
    out = out + ((x * x + y * y) * zz * Fraction(1, 4)).mul_t_power(shift)
    out = out + zz.mul_t_power(2 * shift)
    out = out + (x * second(Y, Z) - y * second(X, Z)).mul_t_power(shift)
    return out


def basis(ch2):
    t_factors = (MixedExpr.one(), MixedExpr.t_power(1), MixedExpr.t_power(2), MixedExpr.log_t())
    for dx in range(4):
        for dy in range(4 - dx):
            for dz in range(4 - dx - dy):
                mono = Polynomial.one()
                for v, d in ((X, dx), (Y, dy), (Z, dz)):
                    if d:
                        mono = mono * Polynomial.variable(v, d)
                for tf in t_factors:
                    yield MixedExpr.from_polynomial(mono) * tf


def main() -> int:
    ch2 = catalog_short_name("ch2")
    namer = lambda v: ch2.var_name(v)

    print("probe 1: five-term operator display on ch2")
    consistent = printed = count = 0
    example = None
    for e in basis(ch2):
        count += 1
        image = tau(ch2, e)
        if image == display_tau(e, doubled=False):
            consistent += 1
        if image == display_tau(e, doubled=True):
            printed += 1
        elif example is None:
            example = e
    print(f"  eigenvalue-consistent t-powers: {consistent}/{count} basis elements match")
    print(f"  as-printed (doubled) t-powers:  {printed}/{count} basis elements match")
    if example is not None:
        print(f"  first disagreement of the printed form: e = {example.render(namer)}")
        print(f"    operator image: {tau(ch2, example).render(namer)}")
        print(f"    printed form:   {display_tau(example, doubled=True).render(namer)}")

    print("\nprobe 2: printed biharmonic candidate for the seed z^4 on ch2")
    candidate = parse(REFERENCE_CANDIDATE, ch2)
    cert = verify(ch2, candidate, 2, kind="reference-candidate", seed="z^4 (printed)")
    print("  certificate:", json.dumps(cert.to_json_dict(), sort_keys=True))
    if cert.verified_order != 2:
        print("  tau^2 residual:", cert.residual_p.render(namer))
    tree = tension_tree(ch2, parse_polynomial("z^4", ch2))
    psi2 = build_psi(ch2, tree, 2)
    own = verify(ch2, psi2, 2, kind="psi", seed="z^4")
    print(
        "  independently built psi_2:",
        json.dumps(own.to_json_dict(), sort_keys=True),
    )
    print("  candidate equals built psi_2:", candidate == psi2)
    diff = candidate - psi2
    first_delta = verify(ch2, diff, 2).to_json_dict()
    print("  difference (candidate - built) certificate:", json.dumps(first_delta, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
