import math

import numpy as np
import pytest
from scipy.special import roots_jacobi

from genjac.errors import DomainError
from genjac.quadrature import (
    beta_fn, composite_rule, gauss_jacobi, inner_product, jacobi_mu0, jacobi_recurrence,
)
from genjac.weight_model import validate

# mpmath, 30 digits: 2^1.2 B(1.5, 0.7)
MU0_HALF_M03 = 2.39866938041782095123377479981
# mpmath.quad of (1-t)^0.3 (1+t)^-0.2 |t-0.5|^0.6 e^t, split at 0.5
MU0_GENERIC = 1.27553754488911531699788872126
# mpmath.quad of (1-t)^-0.5 (1+t)^0.2 |t+0.3|^-0.4 |t-0.6| (2+t)
MU0_TWO = 4.11943751859246427796877552537


def test_mu0_closed_form():
    assert jacobi_mu0(0.5, -0.3) == pytest.approx(MU0_HALF_M03, rel=1e-14)
    assert jacobi_mu0(-0.5, -0.5) == pytest.approx(math.pi, rel=1e-15)
    assert jacobi_mu0(0, 0) == 2.0


def test_beta_large_arguments():
    assert beta_fn(100.0, 120.0) == pytest.approx(math.exp(
        math.lgamma(100) + math.lgamma(120) - math.lgamma(220)), rel=1e-12)


@pytest.mark.parametrize("m, a, b", [(7, 0.5, -0.3), (20, -0.5, -0.5), (40, 2.5, -0.4), (1, 0.3, 0.1)])
def test_gauss_jacobi_vs_scipy(m, a, b):
    rule = gauss_jacobi(m, a, b)
    x, w = roots_jacobi(m, a, b)
    np.testing.assert_allclose(rule.nodes, x, atol=1e-14)
    # scipy's weights carry ~1e-12 relative error at m = 40 (see the mpmath test)
    np.testing.assert_allclose(rule.weights, w, rtol=5e-12, atol=1e-15)


def _mp_gauss_jacobi(m, a, b):
    import mpmath as mp
    mp.mp.dps = 40
    a, b = mp.mpf(a), mp.mpf(b)
    s = a + b
    T = mp.matrix(m, m)
    T[0, 0] = (b - a) / (s + 2)
    for k in range(1, m):
        T[k, k] = (b * b - a * a) / ((2 * k + s) * (2 * k + s + 2))
        t = 2 * k + s
        T[k, k - 1] = T[k - 1, k] = mp.sqrt(4 * k * (k + a) * (k + b) * (k + s) / (t * t * (t + 1) * (t - 1)))
    E, Q = mp.eigsy(T)
    mu0 = 2 ** (s + 1) * mp.beta(a + 1, b + 1)
    x = np.array([float(E[j]) for j in range(m)])
    w = np.array([float(mu0 * Q[0, j] ** 2) for j in range(m)])
    o = np.argsort(x)
    return x[o], w[o]


def test_gauss_jacobi_vs_mpmath():
    x, w = _mp_gauss_jacobi(40, "2.5", "-0.4")
    rule = gauss_jacobi(40, 2.5, -0.4)
    np.testing.assert_allclose(rule.nodes, x, atol=1e-15)
    np.testing.assert_allclose(rule.weights, w, rtol=2e-13)


def test_gauss_jacobi_exactness():
    rule = gauss_jacobi(10, 0.5, -0.3)
    # monomials up to degree 2m-1 = 19, reference from a larger rule
    for k in (0, 5, 19):
        ref = gauss_jacobi(60, 0.5, -0.3).integrate(lambda x: x ** k)
        assert rule.integrate(lambda x: x ** k) == pytest.approx(ref, rel=1e-13, abs=1e-15)


def test_chebyshev_rule_closed_form():
    m = 16
    rule = gauss_jacobi(m, -0.5, -0.5)
    x = np.sort(np.cos(np.pi * (np.arange(m) + 0.5) / m))
    np.testing.assert_allclose(rule.nodes, x, atol=1e-15)
    np.testing.assert_allclose(rule.weights, np.pi / m, rtol=1e-13)


def test_symmetric_rule_is_symmetric():
    rule = gauss_jacobi(15, 0.7, 0.7)
    assert np.all(rule.nodes == -rule.nodes[::-1])
    assert np.all(rule.weights == rule.weights[::-1])


def test_jacobi_recurrence_limits():
    d, o = jacobi_recurrence(0.0, 0.0, 3)
    assert d[0] == 0.0
    assert o[0] == pytest.approx(1 / math.sqrt(3), rel=1e-15)
    d, o = jacobi_recurrence(-0.5, -0.5, 3)
    assert o[0] == pytest.approx(math.sqrt(0.5), rel=1e-15)
    assert o[1] == pytest.approx(0.5, rel=1e-15)
    with pytest.raises(DomainError):
        jacobi_recurrence(-1.0, 0.0, 3)


def test_composite_rule_total_mass():
    spec = validate({"alpha": 0.3, "beta": -0.2, "singularities": [(0.5, 0.3)],
                     "h": np.polynomial.chebyshev.chebinterpolate(np.exp, 20)})
    x, w = composite_rule(spec, 40)
    assert w.sum() == pytest.approx(MU0_GENERIC, rel=1e-13)
    assert np.all(w > 0)


def test_composite_rule_two_singularities():
    spec = validate({"alpha": -0.5, "beta": 0.2, "singularities": [(-0.3, -0.2), (0.6, 0.5)],
                     "h": [2.0, 1.0]})
    x, w = composite_rule(spec, 40)
    assert w.sum() == pytest.approx(MU0_TWO, rel=1e-13)


def test_inner_product_polynomial_exact():
    spec = validate({"alpha": 0.0, "beta": 0.0})
    # integral of x^4 over (-1, 1)
    assert inner_product(lambda x: x ** 2, lambda x: x ** 2, spec, 5) == pytest.approx(0.4, rel=1e-14)
