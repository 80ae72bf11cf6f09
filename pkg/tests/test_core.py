import numpy as np
import pytest

from gztoda.core import (
    CachedGzFunction,
    GzFunction,
    GzPattern,
    HBar,
    commutator,
    compose,
    eval_shifted,
    identity_operator,
    random_pattern,
    random_polynomial,
)
from gztoda.errors import ConfigurationError, SingularityError
from gztoda.glrep import generator


def test_hbar_validation():
    HBar(0.37)
    with pytest.raises(ConfigurationError):
        HBar(0.0)
    with pytest.raises(ConfigurationError):
        HBar(-1.0)


def test_pattern_shape_validation():
    GzPattern([(1.0,), (0.0, 2.0)])
    with pytest.raises(ConfigurationError):
        GzPattern([(1.0, 2.0)])
    with pytest.raises(ConfigurationError):
        GzPattern([(np.inf,)])


def test_eval_shifted_constant_invariant(rng):
    hb = HBar(1.0)
    one = GzFunction(2, lambda p: 1.0 + 0.0j)
    p = random_pattern(2, rng, hb)
    assert eval_shifted(one, p, {(1, 1): 3}, hb) == 1.0 + 0.0j


def test_eval_shifted_linear():
    hb = HBar(1.0)
    f = GzFunction(2, lambda p: p.entry(1, 1))
    p = GzPattern([(0.0,), (1.0, 2.0)])
    assert eval_shifted(f, p, {(1, 1): 1}, hb) == 1j


def test_eval_shifted_square_substitution_oracle():
    hb = HBar(1.0)
    f = GzFunction(2, lambda p: p.entry(1, 1) ** 2)
    p = GzPattern([(2.0,), (1.0, 5.0)])
    got = eval_shifted(f, p, {(1, 1): -1}, hb)
    assert abs(got - (3 - 4j)) < 1e-15


def test_eval_shifted_is_reevaluation_bitwise(rng):
    hb = HBar(0.37)
    f = random_polynomial(3, rng)
    p = random_pattern(3, rng, hb)
    shifts = {(1, 1): -2, (2, 1): 1}
    shifted = p
    for (n, j), k in shifts.items():
        shifted = shifted.shifted(n, j, 1j * hb.value * k)
    assert eval_shifted(f, p, shifts, hb) == f(shifted)


def test_eval_shifted_singularity_detected():
    hb = HBar(1.0)
    f = GzFunction(3, lambda p: 1.0 + 0.0j)
    p = GzPattern([(0.5,), (1.0, 1.0 + 1j), (0.0, 2.0, 4.0)])
    with pytest.raises(SingularityError):
        eval_shifted(f, p, {(2, 1): 1}, hb)


def test_eval_shifted_rejects_top_row():
    hb = HBar(1.0)
    f = GzFunction(2, lambda p: 1.0 + 0.0j)
    p = GzPattern([(0.0,), (1.0, 2.0)])
    with pytest.raises(ConfigurationError):
        eval_shifted(f, p, {(2, 1): 1}, hb)


def test_compose_identity_law(rng):
    hb = HBar(1.0)
    e12 = generator(1, 2, 2, hb)
    ident = identity_operator(2, hb)
    f = random_polynomial(2, rng)
    p = random_pattern(2, rng, hb)
    a = compose(ident, e12)(f)(p)
    b = e12(f)(p)
    assert a == b


def test_compose_mismatched_raises():
    a = identity_operator(2, HBar(1.0))
    b = identity_operator(3, HBar(1.0))
    with pytest.raises(ConfigurationError):
        compose(a, b)
    c = identity_operator(2, HBar(0.5))
    with pytest.raises(ConfigurationError):
        compose(a, c)


def test_commutator_defining_relation(rng):
    # [E12, E21] = E11 - E22 pointwise
    hb = HBar(1.0)
    e12, e21 = generator(1, 2, 2, hb), generator(2, 1, 2, hb)
    e11, e22 = generator(1, 1, 2, hb), generator(2, 2, 2, hb)
    for _ in range(5):
        f = random_polynomial(2, rng)
        p = random_pattern(2, rng, hb)
        lhs = commutator(e12, e21)(f)(p)
        rhs = e11(f)(p) - e22(f)(p)
        assert abs(lhs - rhs) <= 1e-12 * (abs(lhs) + abs(rhs) + 1)


def test_commutator_with_itself_vanishes(rng):
    hb = HBar(1.0)
    e12 = generator(1, 2, 2, hb)
    f = random_polynomial(2, rng)
    p = random_pattern(2, rng, hb)
    v = commutator(e12, e12)(f)(p)
    assert abs(v) < 1e-12 * (abs(e12(e12(f))(p)) + 1)


def test_serre_instance_vanishes(rng):
    # [E12, [E12, E23]] = 0
    hb = HBar(1.0)
    e12, e23 = generator(1, 2, 3, hb), generator(2, 3, 3, hb)
    nested = commutator(e12, commutator(e12, e23))
    for _ in range(3):
        f = random_polynomial(3, rng)
        p = random_pattern(3, rng, hb)
        scale = abs(e12(e23(e12(f)))(p)) + 1
        assert abs(nested(f)(p)) < 1e-11 * scale


@pytest.mark.parametrize("N", [2, 3])
def test_operator_linearity(N, rng, hbar):
    ops = [generator(1, 2, N, hbar), generator(2, 1, N, hbar),
           generator(1, 1, N, hbar)]
    if N >= 3:
        ops.append(generator(1, 3, N, hbar))
    for op in ops:
        for _ in range(20):
            f = random_polynomial(N, rng)
            g = random_polynomial(N, rng)
            a = complex(*rng.normal(size=2))
            b = complex(*rng.normal(size=2))
            comb = GzFunction(N, lambda p, f=f, g=g, a=a, b=b: a * f(p) + b * g(p))
            p = random_pattern(N, rng, hbar)
            lhs = op(comb)(p)
            rhs = a * op(f)(p) + b * op(g)(p)
            assert abs(lhs - rhs) <= 1e-12 * (abs(lhs) + abs(rhs) + 1)


def test_composition_associativity(rng, hbar):
    N = 3
    a = generator(1, 2, N, hbar)
    b = generator(2, 3, N, hbar)
    c = generator(3, 2, N, hbar)
    left = compose(compose(a, b), c)
    right = compose(a, compose(b, c))
    for _ in range(20):
        f = random_polynomial(N, rng)
        p = random_pattern(N, rng, hbar)
        u, v = left(f)(p), right(f)(p)
        assert abs(u - v) <= 1e-12 * (abs(u) + abs(v) + 1)


def test_cached_function_consistency(rng):
    hb = HBar(1.0)
    base = random_polynomial(3, rng)
    cached = CachedGzFunction(base)
    op = generator(1, 3, 3, hb)
    p = random_pattern(3, rng, hb)
    assert op(cached)(p) == op(base)(p)
    assert len(cached._cache) > 0


def test_random_pattern_separation(rng):
    for _ in range(20):
        p = random_pattern(4, rng, HBar(1.0))
        for n in range(1, 4):
            row = p.row(n)
            for s in range(n):
                for t in range(s + 1, n):
                    assert abs(row[s] - row[t]) >= 0.1
