import numpy as np
import pytest

from gztoda.core import (
    CachedGzFunction,
    GzFunction,
    GzPattern,
    HBar,
    random_pattern,
    random_polynomial,
)
from gztoda.errors import ConfigurationError, CostGuardError
from gztoda.yangian import (
    casimir_poly,
    check_casimir_multiplication,
    check_qism_relations,
    check_yangian_relations,
    drinfeld_triple,
    qism_triple,
    reconstruct_generators,
)


def test_casimir_level_one_multiplication(rng):
    hb = HBar(1.0)
    poly = casimir_poly(1, 2, hb)
    assert poly.degree == 1
    f = random_polynomial(2, rng)
    p = random_pattern(2, rng, hb)
    lam = 0.9 - 0.4j
    got = poly(lam)(f)(p)
    want = (lam - p.entry(1, 1)) * f(p)
    assert abs(got - want) < 1e-13 * abs(want)


def test_casimir_level_two_multiplication(rng):
    hb = HBar(0.37)
    poly = casimir_poly(2, 2, hb)
    assert poly.degree == 2
    f = CachedGzFunction(random_polynomial(2, rng))
    p = random_pattern(2, rng, hb)
    lam = -0.3 + 1.1j
    got = poly(lam)(f)(p)
    want = (lam - p.entry(2, 1)) * (lam - p.entry(2, 2)) * f(p)
    assert abs(got - want) < 1e-12 * abs(want)


def test_casimir_leading_coefficient_is_identity(rng):
    hb = HBar(1.0)
    for n in (1, 2, 3):
        poly = casimir_poly(n, 3, hb)
        f = CachedGzFunction(random_polynomial(3, rng))
        p = random_pattern(3, rng, hb)
        assert abs(poly.coefficients[-1](f)(p) - f(p)) < 1e-12 * (abs(f(p)) + 1)


def test_casimir_cost_guard():
    with pytest.raises(CostGuardError):
        casimir_poly(6, 6, HBar(1.0))
    with pytest.raises(ConfigurationError):
        casimir_poly(3, 2, HBar(1.0))


def test_casimir_multiplication_suite(rng, hbar):
    rep = check_casimir_multiplication(3, hbar, trials=4, rng=rng)
    assert rep.passed, rep.to_dict()


def test_drinfeld_b1_explicit(rng):
    # B_1(lam) f = (g11 - g21 - i/2)(g11 - g22 - i/2) f(g11 - i), lam-free
    hb = HBar(1.0)
    d = drinfeld_triple(1, 2, hb)
    assert d.b.degree == 0
    p = GzPattern([(1.1,), (0.4, -0.6)])
    f = GzFunction(2, lambda q: q.entry(1, 1) ** 2)
    for lam in (0.0, 2.0 - 1.0j):
        got = d.b(lam)(f)(p)
        want = (1.1 - 0.4 - 0.5j) * (1.1 + 0.6 - 0.5j) * (1.1 - 1j) ** 2
        assert abs(got - want) < 1e-13 * abs(want)


def test_drinfeld_a_matches_casimir(rng, hbar):
    N = 3
    for n in (1, 2):
        d = drinfeld_triple(n, N, hbar)
        cas = casimir_poly(n, N, hbar)
        for _ in range(3):
            f = CachedGzFunction(random_polynomial(N, rng))
            p = random_pattern(N, rng, hbar)
            lam = complex(*rng.uniform(-3, 3, 2))
            a, b = d.a(lam)(f)(p), cas(lam)(f)(p)
            assert abs(a - b) <= 1e-11 * (abs(a) + abs(b) + 1)


def test_triple_degrees():
    hb = HBar(1.0)
    d = drinfeld_triple(2, 3, hb)
    assert d.a.degree == 2 and d.b.degree == 1 and d.c.degree == 1
    with pytest.raises(ConfigurationError):
        drinfeld_triple(3, 3, hb)


@pytest.mark.parametrize("N", [2, 3])
def test_yangian_relations(N, rng, hbar):
    rep = check_yangian_relations(N, hbar, trials=6, rng=rng)
    assert rep.passed, rep.to_dict()


@pytest.mark.parametrize("N", [2, 3])
def test_qism_relations_and_similarity(N, rng, hbar):
    rep = check_qism_relations(N, hbar, trials=6, rng=rng)
    assert rep.passed, rep.to_dict()
    consts = rep.meta["similarity_constants"]
    # the scalar between the normalizations: +1 for the B family, -1 for C
    for key, (re, im) in consts.items():
        want = 1.0 if key.startswith("b") else -1.0
        assert abs(complex(re, im) - want) < 1e-9


def test_qism_exchange_relations_direct(rng):
    # one hand-rolled instance of the exchange relation at numeric lam, mu
    hb = HBar(1.0)
    q = qism_triple(1, 2, hb)
    f = CachedGzFunction(random_polynomial(2, rng))
    p = random_pattern(2, rng, hb)
    lam, mu = 1.2 - 0.3j, -0.7 + 0.9j
    t1 = (lam - mu + 1j) * q.a(lam)(q.b(mu)(f))(p)
    t2 = (lam - mu) * q.b(mu)(q.a(lam)(f))(p)
    t3 = 1j * q.a(mu)(q.b(lam)(f))(p)
    assert abs(t1 - t2 - t3) <= 1e-12 * (abs(t1) + abs(t2) + abs(t3))


@pytest.mark.parametrize("n", [1, 2])
def test_reconstruction_roundtrip(n, rng, hbar):
    rep = reconstruct_generators(n, 3, hbar, trials=4, rng=rng)
    assert rep.passed, rep.to_dict()


def test_reconstruction_node_doubling_stable(rng):
    rep = reconstruct_generators(1, 2, HBar(1.0), trials=3, rng=rng, n_theta=96)
    stab = [c for c in rep.checks if c.name == "angular-doubling"][0]
    assert stab.max_error < 1e-12
