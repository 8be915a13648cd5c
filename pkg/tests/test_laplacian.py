import random
from fractions import Fraction

import pytest

from polyharm import (
    MixedExpr,
    Polynomial,
    VarIndex,
    WrongLayer,
    ad_power,
    bernoulli,
    kappa,
    left_invariant_fields,
    parse,
    parse_polynomial,
    struct_polys,
    tau,
    tau_fast_x1,
    tau_fast_x1x2,
    tau_frame,
    tau_t,
)

from conftest import random_mixed_expr, random_polynomial
from oracles import brute_ad_power, ch2_display_tau
from test_algebra import filiform

X = VarIndex(1, 1)
Y = VarIndex(1, 2)
Z = VarIndex(2, 1)


def test_bernoulli_values():
    expected = [
        Fraction(1),
        Fraction(1, 2),  # positive by convention
        Fraction(1, 6),
        Fraction(0),
        Fraction(-1, 30),
        Fraction(0),
        Fraction(1, 42),
        Fraction(0),
        Fraction(-1, 30),
    ]
    assert [bernoulli(r) for r in range(9)] == expected


def test_ad_power_ch2(ch2):
    # ad(X) Y picks up x*Z from the generic element's x-component
    row = ad_power(ch2, 1, 2, 1)
    assert row == {Z: Polynomial.variable(X)}
    for v in ch2.variables():
        assert ad_power(ch2, v.layer, v.slot, 2) == {}


def test_ad_power_abelian(rh3):
    for v in rh3.variables():
        assert ad_power(rh3, v.layer, v.slot, 1) == {}


def test_ad_power_matches_bracket_iteration(rh2, rh4, ch2, ch3):
    for spec in (rh2, rh4, ch2, ch3, filiform()):
        for v in spec.variables():
            for r in range(1, spec.m + 1):
                assert ad_power(spec, v.layer, v.slot, r) == brute_ad_power(
                    spec, v.layer, v.slot, r
                )


def test_struct_polys_ch2(ch2):
    table = struct_polys(ch2)
    half = Fraction(1, 2)
    assert table.P(1, 1, 2, 1) == Polynomial.variable(Y) * -half
    assert table.P(1, 2, 2, 1) == Polynomial.variable(X) * half
    # identity block for i >= alpha
    assert table.P(1, 1, 1, 1) == Polynomial.one()
    assert table.P(1, 1, 1, 2) == Polynomial.zero()
    assert table.P(2, 1, 2, 1) == Polynomial.one()
    assert table.P(2, 1, 1, 1) == Polynomial.zero()


def test_struct_polys_rh_identity(rh4):
    table = struct_polys(rh4)
    for v in rh4.variables():
        for w in rh4.variables():
            expected = Polynomial.one() if v == w else Polynomial.zero()
            assert table.P(v.layer, v.slot, w.layer, w.slot) == expected


def test_struct_polys_filiform_second_order():
    # hand expansion: P^{13}_{11} = 1/2 * (-x2_1) + 1/12 * (-x1_1*x1_2)
    spec = filiform()
    table = struct_polys(spec)
    expected = Polynomial.variable(VarIndex(2, 1)) * Fraction(-1, 2) + (
        Polynomial.variable(VarIndex(1, 1)) * Polynomial.variable(VarIndex(1, 2))
    ) * Fraction(-1, 12)
    assert table.P(1, 1, 3, 1) == expected


def test_struct_poly_invariants(ch2, ch3):
    for spec in (ch2, ch3, filiform()):
        table = struct_polys(spec)
        for (i, j, alpha, beta, r), p in table.order_cache.items():
            assert p.is_zero() or p.homogeneous_degree() == r
        for (i, j, alpha, beta), p in table.entries.items():
            assert p.total_degree() < spec.m
            if i >= alpha:
                assert (i, j) == (alpha, beta) and p == Polynomial.one()


def test_left_invariant_fields_ch2(ch2):
    fields = {f.label: f for f in left_invariant_fields(ch2)}
    assert fields["A"].t_coefficient == MixedExpr.t_power(1)
    assert not fields["A"].x_coefficients
    x_field = fields["X1_1"]
    half = Fraction(1, 2)
    assert x_field.x_coefficients[X] == MixedExpr.t_power(half)
    assert x_field.x_coefficients[Z] == MixedExpr.from_polynomial(
        Polynomial.variable(Y) * -half, mu=half
    )
    y_field = fields["X1_2"]
    assert y_field.x_coefficients[Y] == MixedExpr.t_power(half)
    assert y_field.x_coefficients[Z] == MixedExpr.from_polynomial(
        Polynomial.variable(X) * half, mu=half
    )
    z_field = fields["X2_1"]
    assert z_field.x_coefficients == {Z: MixedExpr.t_power(1)}


def test_tau_examples(rh2, ch2):
    # the Heisenberg-plane seed z^4 splits into the two tree components
    img = tau(ch2, parse("z^4", ch2))
    assert img == parse("3*(x^2 + y^2)*z^2*t + 12*z^2*t^2", ch2)
    # one-dimensional flat seed
    assert tau(rh2, parse("x^6", rh2)) == parse("30*x^4*t^2", rh2)
    assert tau(rh2, MixedExpr.constant(5)).is_zero()


def test_tau_z2_ch2(ch2):
    assert tau(ch2, parse("z^2", ch2)) == parse("1/2*(x^2 + y^2)*t + 2*t^2", ch2)


def test_tau_t_consistency(rh2, ch2):
    for spec in (rh2, ch2):
        n = spec.homogeneous_dim
        for text in ("t^2", "log(t)", "t^3*log(t)^2", "t^(1/2)", "t^(-1)*log(t)"):
            e = parse(text)
            assert tau_t(e, n) == tau(spec, e)


def test_frame_equals_coordinate_formula(rh2, rh4, ch2, ch3):
    rng = random.Random(1234)
    for spec in (rh2, rh4, ch2, ch3, filiform()):
        for _ in range(20):
            e = random_mixed_expr(spec, rng)
            assert tau(spec, e) == tau_frame(spec, e)


def test_fast_path_x1(rh2, ch2):
    assert tau_fast_x1(rh2, parse_polynomial("x^6", rh2)) == parse("30*x^4*t^2", rh2)
    assert tau_fast_x1(ch2, parse_polynomial("x^2 + y^2", ch2)) == parse("4*t")
    assert tau_fast_x1(ch2, parse_polynomial("x", ch2)).is_zero()
    with pytest.raises(WrongLayer):
        tau_fast_x1(ch2, parse_polynomial("z", ch2))


def test_fast_path_x1x2(ch2):
    assert tau_fast_x1x2(ch2, parse_polynomial("z^4", ch2)) == parse(
        "3*(x^2 + y^2)*z^2*t + 12*z^2*t^2", ch2
    )
    assert tau_fast_x1x2(ch2, parse_polynomial("z^2", ch2)) == parse(
        "1/2*(x^2 + y^2)*t + 2*t^2", ch2
    )
    assert tau_fast_x1x2(ch2, parse_polynomial("x", ch2)).is_zero()


def test_fast_paths_agree_with_tau(rh2, rh4, ch2, ch3):
    rng = random.Random(99)
    for spec in (rh2, rh4, ch2, ch3):
        for _ in range(15):
            h1 = random_polynomial(spec, rng, layers={1})
            e1 = MixedExpr.from_polynomial(h1)
            assert tau_fast_x1(spec, h1) == tau(spec, e1)
            h12 = random_polynomial(spec, rng, layers={1, 2} & set(range(1, spec.m + 1)))
            e12 = MixedExpr.from_polynomial(h12)
            assert tau_fast_x1x2(spec, h12) == tau(spec, e12)


def test_wrong_layer_for_higher_layers():
    spec = filiform()
    top = Polynomial.variable(VarIndex(3, 1))
    with pytest.raises(WrongLayer):
        tau_fast_x1(spec, top)
    with pytest.raises(WrongLayer):
        tau_fast_x1x2(spec, top)


def test_kappa_examples(rh2, ch2):
    assert kappa(ch2, parse("x", ch2), parse("z", ch2)) == parse("-1/2*y*t", ch2)
    assert kappa(ch2, parse("x*y*z", ch2), MixedExpr.one()).is_zero()
    assert kappa(rh2, parse("x", rh2), parse("x", rh2)) == parse("t^2")


def test_product_rule(rh2, ch2, ch3):
    rng = random.Random(7)
    for spec in (rh2, ch2, ch3, filiform()):
        for _ in range(10):
            f = random_mixed_expr(spec, rng, max_degree=2)
            h = random_mixed_expr(spec, rng, max_degree=2)
            lhs = tau(spec, f * h)
            rhs = tau(spec, f) * h + kappa(spec, f, h) * 2 + f * tau(spec, h)
            assert lhs == rhs


def test_ch2_display_operator(ch2):
    rng = random.Random(11)
    for _ in range(20):
        e = random_mixed_expr(ch2, rng)
        assert tau(ch2, e) == ch2_display_tau(e)


def test_closure_no_representation_escape(rh2, ch2, ch3):
    # the operator image always stays in the (monomial, t-power, log-power)
    # class: rational t-exponents, non-negative integer log-powers
    rng = random.Random(42)
    for spec in (rh2, ch2, ch3, filiform()):
        for _ in range(10):
            e = random_mixed_expr(spec, rng)
            image = tau(spec, e)
            for (mono, mu, logpow), coeff in image.terms.items():
                assert isinstance(mu, Fraction)
                assert isinstance(logpow, int) and logpow >= 0
                assert coeff != 0
                assert all(exp > 0 for _, exp in mono.exps)
