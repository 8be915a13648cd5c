"""Shared fixtures: catalog algebras and deterministic random generators."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from polyharm import MixedExpr, Polynomial, VarIndex, catalog
from polyharm.poly import Monomial


@pytest.fixture(scope="session")
def rh2():
    return catalog("real-hyperbolic", [1])


@pytest.fixture(scope="session")
def rh3():
    return catalog("real-hyperbolic", [2])


@pytest.fixture(scope="session")
def rh4():
    return catalog("real-hyperbolic", [3])


@pytest.fixture(scope="session")
def ch2():
    return catalog("complex-hyperbolic", [1])


@pytest.fixture(scope="session")
def ch3():
    return catalog("complex-hyperbolic", [2])


def random_polynomial(
    spec,
    rng: random.Random,
    max_degree: int = 4,
    max_terms: int = 4,
    layers: set[int] | None = None,
) -> Polynomial:
    """Small random polynomial over the algebra's coordinates, never zero."""
    variables = [v for v in spec.variables() if layers is None or v.layer in layers]
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            degree = rng.randint(0, max_degree)
            exps: dict[VarIndex, int] = {}
            for _ in range(degree):
                v = rng.choice(variables)
                exps[v] = exps.get(v, 0) + 1
            coeff = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
            if coeff:
                mono = Monomial(exps.items())
                terms[mono] = terms.get(mono, Fraction(0)) + coeff
        p = Polynomial(terms)
        if not p.is_zero():
            return p


def random_mixed_expr(spec, rng: random.Random, max_degree: int = 3) -> MixedExpr:
    """Random member of the closed class with half-integer t-powers and logs."""
    out = MixedExpr.zero()
    for _ in range(rng.randint(1, 3)):
        poly = random_polynomial(spec, rng, max_degree=max_degree, max_terms=3)
        mu = Fraction(rng.randint(-2, 4), rng.choice((1, 2)))
        logpow = rng.randint(0, 2)
        out = out + MixedExpr.from_polynomial(poly, mu=mu, logpow=logpow)
    if out.is_zero():
        return MixedExpr.one()
    return out
