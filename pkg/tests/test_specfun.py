import cmath
import math

import numpy as np
import pytest
from scipy.integrate import quad as scipy_quad

from gztoda.errors import DegenerateParameterError, DomainError, PoleError
from gztoda.specfun import (
    gauss_2f1,
    harish_chandra_c,
    legendre_p,
    log_gamma,
    log_gamma_grid,
    macdonald_k,
)


class TestLogGamma:
    def test_gamma_one(self):
        assert abs(log_gamma(1.0)) < 1e-14

    def test_gamma_half(self):
        assert abs(log_gamma(0.5) - math.log(math.sqrt(math.pi))) < 1e-14

    def test_recursion_shift_oracle(self):
        # log G(z) = log G(z+5) - sum_k log(z+k), checked at 3+4i
        z = 3 + 4j
        ref = log_gamma(z + 5) - sum(cmath.log(z + k) for k in range(5))
        got = log_gamma(z)
        # agreement modulo 2 pi i (branch wraps cancel in exp)
        diff = got - ref
        wrapped = complex(diff.real, (diff.imag + math.pi) % (2 * math.pi) - math.pi)
        assert abs(wrapped) < 1e-13

    def test_pole_raises(self):
        for z in (0.0, -1.0, -7.0):
            with pytest.raises(PoleError):
                log_gamma(z)

    def test_functional_equation_bulk(self, rng):
        # log G(z+1) - log G(z) - log z = 0 (mod 2 pi i) at 1e4 random points
        z = rng.uniform(-50, 50, 10000) + 1j * rng.uniform(-50, 50, 10000)
        z = z[np.abs(z.imag) > 1e-3]
        lhs = log_gamma_grid(z + 1) - log_gamma_grid(z) - np.log(z)
        wrapped = np.abs(np.exp(lhs) - 1.0)
        assert np.max(wrapped) < 1e-12

    def test_reflection_product(self, rng):
        # G(z) G(1-z) sin(pi z) = pi away from the integer lattice
        for _ in range(200):
            z = complex(rng.uniform(-8, 8), rng.uniform(-8, 8))
            if abs(z.imag) < 0.1:
                continue
            val = cmath.exp(log_gamma(z) + log_gamma(1 - z)) * cmath.sin(math.pi * z)
            assert abs(val - math.pi) < 1e-10 * math.pi

    def test_accuracy_against_recursion_large(self, rng):
        # push |z| toward 100 and compare against a many-step recursion from
        # a moderate argument
        for _ in range(50):
            z = complex(rng.uniform(0.5, 10), rng.uniform(-5, 5))
            n = int(rng.integers(50, 90))
            direct = log_gamma(z + n)
            stepped = log_gamma(z) + sum(cmath.log(z + k) for k in range(n))
            assert abs(cmath.exp(direct - stepped) - 1.0) < 1e-11


class TestMacdonald:
    def test_half_integer_closed_form(self):
        want = math.sqrt(math.pi / 2.0) * math.exp(-1.0)
        assert abs(macdonald_k(0.5, 1.0) - want) < 1e-12

    def test_k0_against_independent_quadrature(self):
        ref, _ = scipy_quad(lambda t: math.exp(-2.0 * math.cosh(t)), 0.0, 20.0)
        assert abs(macdonald_k(0.0, 2.0) - ref) < 1e-10
        assert abs(macdonald_k(0.0, 2.0) - 0.11389387274953343) < 1e-9

    def test_even_in_order(self, rng):
        for _ in range(10):
            nu = complex(rng.uniform(-2, 2), rng.uniform(-5, 5))
            z = rng.uniform(0.3, 8.0)
            assert abs(macdonald_k(nu, z) - macdonald_k(-nu, z)) < 1e-12

    def test_self_convergence_under_doubling(self):
        a = macdonald_k(1.3j, 0.5, tol=1e-11)
        b = macdonald_k(1.3j, 0.5, tol=1e-13)
        assert abs(a - b) < 1e-11

    def test_domain_error(self):
        with pytest.raises(DomainError):
            macdonald_k(0.0, -1.0)


class TestGauss2F1:
    def test_value_at_zero(self, rng):
        a, b, c = rng.normal(size=3) + 1j * rng.normal(size=3)
        assert gauss_2f1(a, b, c, 0.0) == 1.0

    def test_log_oracle(self):
        # 2F1(1,1;2;x) = -log(1-x)/x
        x = 0.5
        assert abs(gauss_2f1(1, 1, 2, x) - 2.0 * math.log(2.0)) < 1e-13

    def test_argument_symmetry(self, rng):
        for _ in range(10):
            a = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
            b = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
            c = complex(rng.uniform(0.5, 3), rng.uniform(-1, 1))
            x = rng.uniform(0.0, 0.9)
            assert abs(gauss_2f1(a, b, c, x) - gauss_2f1(b, a, c, x)) < 1e-12

    def test_c_pole_rejected(self):
        with pytest.raises(DomainError):
            gauss_2f1(1.0, 1.0, -2.0, 0.3)

    def test_x_domain(self):
        with pytest.raises(DomainError):
            gauss_2f1(1.0, 1.0, 2.0, 1.0)


class TestLegendreP:
    def test_value_at_one(self, rng):
        nu = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        assert legendre_p(nu, 1.0) == 1.0

    def test_degree_one_is_identity(self):
        assert abs(legendre_p(1.0, 2.0) - 2.0) < 1e-12

    def test_ode_residual_oracle(self):
        # (1-z^2) P'' - 2 z P' + nu (nu+1) P = 0, central differences in z
        nu = -0.5 + 0.7j
        z = math.cosh(1.0)
        h = 1e-4
        p0 = legendre_p(nu, z)
        pp = legendre_p(nu, z + h)
        pm = legendre_p(nu, z - h)
        d1 = (pp - pm) / (2 * h)
        d2 = (pp - 2 * p0 + pm) / (h * h)
        res = (1 - z * z) * d2 - 2 * z * d1 + nu * (nu + 1) * p0
        assert abs(res) / abs(p0) < 1e-6

    def test_half_integer_degenerate(self):
        with pytest.raises(DegenerateParameterError):
            legendre_p(0.5, 2.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            legendre_p(1.0, 0.5)


class TestHarishChandra:
    def test_explicit_value(self):
        # l1 - l2 = -i hbar gives G(1/2)/G(1) = sqrt(pi)
        got = harish_chandra_c(0.0, 1j, 1.0)
        assert abs(got - math.sqrt(math.pi)) < 1e-13

    def test_product_finite_for_real_distinct(self, rng):
        for _ in range(10):
            l1, l2 = rng.uniform(-3, 3, 2)
            if abs(l1 - l2) < 0.05:
                continue
            v = harish_chandra_c(l1, l2, 1.0) * harish_chandra_c(l2, l1, 1.0)
            assert np.isfinite(v.real) and np.isfinite(v.imag)

    def test_coincident_pole(self):
        with pytest.raises(PoleError):
            harish_chandra_c(0.7, 0.7, 1.0)
