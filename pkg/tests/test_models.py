import cmath
import math

import numpy as np
import pytest

from gztoda.core import HBar
from gztoda.errors import ConfigurationError, DomainError
from gztoda.models import (
    SpectralParams,
    SutherlandEvaluator,
    TodaEvaluator,
    sutherland_asymptote,
    sutherland_eigencheck,
    sutherland_n2_oracle,
    toda_eigencheck,
    toda_n2_oracle,
    toda_qism_identity,
    toda_wavefunction,
)
from gztoda.quad import ContourSpec, default_contour


def _params(gamma, hb=1.0):
    return SpectralParams(tuple(gamma), HBar(hb))


def test_spectral_params_distinct():
    with pytest.raises(ConfigurationError):
        SpectralParams((0.5, 0.5), HBar(1.0))


def test_toda_n1_plane_wave():
    p = _params((0.7,))
    s = toda_wavefunction(p, (1.3,))
    assert s.err_estimate == 0.0
    assert abs(s.value - cmath.exp(0.7j * 1.3)) < 1e-15


@pytest.mark.parametrize("gamma", [(0.5, -0.5), (1.3, 0.2)])
def test_toda_n2_macdonald_oracle(gamma):
    p = _params(gamma)
    ev = TodaEvaluator(p)
    for d in np.linspace(-2.0, 2.0, 11):
        x = (d / 2.0, -d / 2.0)
        s = ev.value(x)
        o = toda_n2_oracle(p, x)
        assert abs(s.value - o) / abs(o) < 1e-6
        # self-convergence estimate bounds the truth within a factor of 10
        assert abs(s.value - o) <= 10.0 * s.err_estimate + 1e-13 * abs(o)


def test_toda_n2_oracle_offcenter_x():
    p = _params((1.3, 0.2))
    ev = TodaEvaluator(p)
    for x in [(0.7, 0.1), (-0.2, -1.0), (1.4, 0.9)]:
        o = toda_n2_oracle(p, x)
        s = ev.value(x)
        assert abs(s.value - o) / abs(o) < 1e-6


def test_toda_gamma_permutation_invariance():
    a = _params((1.3, 0.2))
    b = _params((0.2, 1.3))
    x = (0.4, -0.3)
    va = TodaEvaluator(a).value(x).value
    vb = TodaEvaluator(b).value(x).value
    assert abs(va - vb) / abs(va) < 1e-7


def test_toda_n3_gamma_permutation_invariance():
    x = (0.4, 0.0, -0.3)
    base = TodaEvaluator(_params((0.9, 0.1, -0.8))).value(x).value
    for perm in [(0.1, 0.9, -0.8), (-0.8, 0.1, 0.9)]:
        v = TodaEvaluator(_params(perm)).value(x).value
        assert abs(v - base) / abs(base) < 1e-7


def test_toda_n3_direct_vs_recursive():
    p = _params((0.9, 0.1, -0.8))
    spec_d = default_contour(3, p.hbar, p.gamma_top)
    spec_r = ContourSpec((0.8, 0.45), spec_d.radius * 1.1, spec_d.nodes + 54)
    ev_d = TodaEvaluator(p, spec_d, method="direct")
    ev_r = TodaEvaluator(p, spec_r, method="recursive")
    for x in [(0.3, 0.0, -0.3), (0.8, 0.2, -0.5), (-0.4, 0.1, 0.6)]:
        a, b = ev_d.value(x), ev_r.value(x)
        assert abs(a.value - b.value) / abs(a.value) < 1e-5
        assert abs(a.value - b.value) <= 10.0 * (a.err_estimate + b.err_estimate) \
            + 1e-10 * abs(a.value)


def test_toda_contour_offset_invariance():
    p = _params((0.5, -0.5))
    x = (0.4, -0.3)
    base = TodaEvaluator(p, default_contour(2, p.hbar, p.gamma_top)).value(x).value
    for d in (0.4, 0.6):
        spec = default_contour(2, p.hbar, p.gamma_top, delta=d)
        v = TodaEvaluator(p, spec).value(x).value
        assert abs(v - base) / abs(base) < 1e-8


def test_toda_n3_contour_offset_invariance():
    p = _params((0.9, 0.1, -0.8))
    x = (0.3, 0.0, -0.3)
    spec0 = default_contour(3, p.hbar, p.gamma_top)
    base = TodaEvaluator(p, spec0).value(x).value
    for off in [(1.1, 0.6), (0.9, 0.4)]:
        spec = ContourSpec(off, spec0.radius, spec0.nodes)
        v = TodaEvaluator(p, spec).value(x).value
        assert abs(v - base) / abs(base) < 1e-8


def test_toda_eigencheck_n2():
    p = _params((0.5, -0.5))
    rep = toda_eigencheck(p, [(0.3, -0.2), (1.0, 0.1)])
    assert rep.passed, rep.to_dict()
    by_name = {c.name: c.max_error for c in rep.checks}
    assert by_name["h1"] < 1e-6
    assert by_name["h2"] < 1e-4


def test_toda_eigencheck_lambda_at_root():
    # A_2(gamma_1) psi ~ 0: the eigenvalue polynomial vanishes at a root
    p = _params((0.5, -0.5))
    rep = toda_eigencheck(p, [(0.4, -0.1)], lambdas=(0.5,))
    assert rep.passed, rep.to_dict()


def test_finite_difference_order_scaling():
    # without Richardson the eigen-residual scales like h^2
    p = _params((0.5, -0.5))
    x = (0.35, -0.15)
    res = {}
    for h in (2e-2, 1e-2):
        rep = toda_eigencheck(p, [x], h_x=h, richardson=False,
                              thresholds=(1.0, 1.0, 1.0))
        res[h] = {c.name: c.max_error for c in rep.checks}["h2"]
    order = math.log2(res[2e-2] / res[1e-2])
    assert 1.7 < order < 2.3


@pytest.mark.parametrize("n,lam", [(1, 0.7 + 0.2j), (2, 0.7 + 0.2j)])
def test_toda_qism_identity_n2(n, lam):
    p = _params((0.5, -0.5))
    rep = toda_qism_identity(p, (0.4, -0.3), lam, n)
    assert rep.passed, rep.to_dict()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_toda_qism_identity_n3(n):
    p = _params((0.9, 0.1, -0.8))
    rep = toda_qism_identity(p, (0.4, 0.0, -0.35), 0.8 - 0.4j, n)
    assert rep.passed, rep.to_dict()


@pytest.mark.parametrize("gamma", [(0.5, -0.5), (1.3, 0.2)])
def test_sutherland_n2_legendre_oracle(gamma):
    p = _params(gamma)
    ev = SutherlandEvaluator(p)
    for d in np.linspace(0.2, 2.0, 10):
        x = (d / 2.0, -d / 2.0)
        s = ev.value(x)
        o = sutherland_n2_oracle(p, x)
        assert abs(s.value - o) / abs(o) < 1e-6


def test_sutherland_kernels_positive():
    # |Gamma|^2 kernels are real positive: the integrand phase is the plane
    # wave alone, so at x1 = -x2 and symmetric spectrum the value is real
    p = _params((0.5, -0.5))
    s = SutherlandEvaluator(p).value((0.8, -0.8))
    assert abs(s.value.imag) < 1e-10 * abs(s.value)


def test_sutherland_harish_chandra_asymptotics():
    for gamma in [(0.5, -0.5), (1.3, 0.2)]:
        p = _params(gamma)
        s = SutherlandEvaluator(p).value((4.0, -4.0))
        a = sutherland_asymptote(p, (4.0, -4.0))
        assert abs(s.value - a) / abs(a) < 1e-2


def test_sutherland_chamber_enforced():
    p = _params((0.5, -0.5))
    ev = SutherlandEvaluator(p)
    with pytest.raises(DomainError):
        ev.value((0.0, 0.0))
    with pytest.raises(DomainError):
        ev.value((-1.0, 1.0))


def test_sutherland_eigencheck_n2():
    p = _params((0.5, -0.5))
    rep = sutherland_eigencheck(p, [(0.5, -0.4), (1.1, 0.2)])
    assert rep.passed, rep.to_dict()
    by_name = {c.name: c.max_error for c in rep.checks}
    assert by_name["h1"] < 1e-6
    assert by_name["h2"] < 1e-4
    assert by_name["zonal-h2"] < 1e-4


def test_sutherland_zonal_shift_constant():
    # the zonal-form eigenvalue carries sigma_2(rho) = -1/4 at N=2: check
    # the shifted eigenvalue is what makes the residual vanish
    from gztoda.glrep import rho_vector

    rho = rho_vector(2)
    assert rho[0] * rho[1] == -0.25


@pytest.mark.slow
def test_sutherland_eigencheck_n3():
    p = _params((0.9, 0.1, -0.8))
    rep = sutherland_eigencheck(p, [(0.7, 0.0, -0.6)])
    assert rep.passed, rep.to_dict()


@pytest.mark.slow
def test_toda_eigencheck_n3():
    p = _params((0.9, 0.1, -0.8))
    rep = toda_eigencheck(p, [(0.3, 0.0, -0.3)])
    assert rep.passed, rep.to_dict()
