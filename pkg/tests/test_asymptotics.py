import math

import numpy as np
import pytest

from genjac.asymptotics import (
    A1, B1, an_sq_first_order, b_first_order, phase_phi, phi_map, predict,
    pv_log_h_integral, pv_log_h_integral_quadrature, residues, sqrt_z2m1, szego,
)
from genjac.errors import DomainError
from genjac.recurrence_oracle import stieltjes
from genjac.weight_model import ChebSeries, eval_weight, log_h_series, reflect, validate

EXP20 = np.polynomial.chebyshev.chebinterpolate(np.exp, 20)


def generic():
    return validate({"alpha": 0.3, "beta": -0.2, "singularities": [(0.5, 0.3)], "h": EXP20})


def two_sing():
    return validate({"alpha": 0.2, "beta": -0.3, "singularities": [(-0.4, 0.35), (0.3, -0.2)],
                     "h": [2.0, 0.6, 0.1]})


# -- principal value ------------------------------------------------------------

def test_pv_constant_is_zero():
    assert pv_log_h_integral(ChebSeries((1.7,)), 0.3) == 0.0


def test_pv_t1_is_pi():
    x = np.array([-0.7, 0.0, 0.45])
    np.testing.assert_allclose(pv_log_h_integral(ChebSeries((0.0, 1.0)), x), math.pi, rtol=1e-15)


def test_pv_t2_example():
    assert pv_log_h_integral(ChebSeries((0, 0, 1.0)), 0.3) == pytest.approx(0.6 * math.pi, rel=1e-14)
    assert 0.6 * math.pi == pytest.approx(1.88495559, abs=1e-8)


def test_pv_vs_subtraction_quadrature():
    logh = log_h_series(two_sing())
    for x in (-0.8, -0.1, 0.35, 0.9):
        exact = pv_log_h_integral(logh, x)
        assert exact == pytest.approx(pv_log_h_integral_quadrature(logh, x), abs=1e-12)


def test_pv_linearity():
    rng = np.random.default_rng(3)
    c1, c2 = rng.normal(size=12), rng.normal(size=12)
    x = rng.uniform(-0.9, 0.9, 7)
    lhs = pv_log_h_integral(ChebSeries(tuple(2 * c1 - 3 * c2)), x)
    rhs = 2 * pv_log_h_integral(ChebSeries(tuple(c1)), x) - 3 * pv_log_h_integral(ChebSeries(tuple(c2)), x)
    assert np.abs(lhs - rhs).max() < 1e-13


def test_pv_domain():
    with pytest.raises(DomainError):
        pv_log_h_integral(ChebSeries((0, 1.0)), 1.0)


# -- phases ----------------------------------------------------------------------

def test_phase_symmetric_vanishes():
    spec = validate({"alpha": 0.4, "beta": 0.4, "singularities": [(0.0, 0.3)], "h": [1.5, 0, 0.2]})
    assert abs(phase_phi(spec, 1)) < 1e-15


def test_phase_two_singularities_example():
    spec = validate({"alpha": 0, "beta": 0, "singularities": [(-0.5, 0.2), (0.5, 0.4)]})
    assert phase_phi(spec, 1) == pytest.approx(0.2 * math.pi, abs=1e-14)


def test_phase_index_error():
    with pytest.raises(IndexError):
        phase_phi(generic(), 2)


def test_phase_gauge_invariance():
    s1 = generic()
    s2 = validate({"alpha": 0.3, "beta": -0.2, "singularities": [(0.5, 0.3)], "h": 4.0 * EXP20})
    assert phase_phi(s1, 1) == pytest.approx(phase_phi(s2, 1), abs=1e-12)
    n = np.arange(1, 30)
    assert np.abs(A1(s1, n) - A1(s2, n)).max() < 1e-12
    assert np.abs(B1(s1, n) - B1(s2, n)).max() < 1e-12


def test_reflection_covariance_of_prediction():
    s, r = two_sing(), reflect(two_sing())
    n = np.arange(1, 40)
    assert np.abs(A1(s, n) - A1(r, n)).max() < 1e-12
    assert np.abs(predict(s, n)[1] + predict(r, n)[1]).max() < 1e-12


# mpmath (30 digits) subtraction-form PV of log(2 + 0.6 T1 + 0.1 T2) at -0.4 and 0.3
PV_TWO = {-0.4: 0.874750139622577237962685246566, 0.3: 1.00449681896900048550237074408}


def test_pv_and_phases_frozen():
    spec = two_sing()
    logh = log_h_series(spec)
    for x, ref in PV_TWO.items():
        assert pv_log_h_integral(logh, x) == pytest.approx(ref, abs=1e-14)
    lams = spec.lams
    total = 0.2 - 0.3 + 2 * lams.sum()
    ref1 = (0.2 + 0.35 - 0.4) * math.pi - total * math.acos(-0.4) - math.sqrt(1 - 0.16) / math.pi * PV_TWO[-0.4]
    ref2 = (0.2 - 0.2) * math.pi - total * math.acos(0.3) - math.sqrt(1 - 0.09) / math.pi * PV_TWO[0.3]
    assert phase_phi(spec, 1) == pytest.approx(ref1, abs=1e-14)
    assert phase_phi(spec, 2) == pytest.approx(ref2, abs=1e-14)


# -- A1, B1, predict -----------------------------------------------------------------

def test_a1_b1_vanish_without_singularities():
    spec = validate({"alpha": 0.3, "beta": 0.1})
    assert A1(spec, 7) == 0.0 and B1(spec, 7) == 0.0
    assert predict(spec, 9) == (0.5, 0.0)


def test_nevai_prediction():
    spec = validate({"alpha": -0.5, "beta": -0.5, "singularities": [(0.0, 0.25)]})
    a, b = predict(spec, 10)
    assert a == pytest.approx(0.4875, abs=1e-15)
    assert abs(b) < 1e-15
    n = np.arange(1, 20)
    np.testing.assert_allclose(A1(spec, n), (-1.0) ** (n + 1) * 0.125, atol=1e-15)


def test_generic_a1_matches_oracle_fit():
    spec = generic()
    t = stieltjes(spec, 201)
    n = np.arange(100, 201)
    fit = n * (t.a[n - 1] - 0.5)
    # residual O(1/n): n (a_n - 1/2) - A1 = O(1/n)
    assert np.abs(fit - A1(spec, n)).max() < 0.01


# -- Szego function ------------------------------------------------------------------

def test_branch_convention():
    z = np.array([2.0, -2.0, 0.3 + 1e-3j, 10j])
    s = sqrt_z2m1(z)
    assert s[0] == pytest.approx(math.sqrt(3)) and s[1] == pytest.approx(-math.sqrt(3))
    assert np.all(np.abs(phi_map(z)) > 1)


def test_phi_boundary_product():
    x = np.linspace(-0.9, 0.9, 7)
    up = phi_map(x + 0j)
    lo = phi_map(np.array([complex(v, -0.0) for v in x]))
    np.testing.assert_allclose(up * lo, 1.0, atol=1e-14)


def test_dinf_pure_jacobi():
    for a, b in [(-0.5, -0.5), (0.3, 1.2), (2.5, -0.4)]:
        sz = szego({"alpha": a, "beta": b})
        assert sz.D_infinity == pytest.approx(2 ** (-(a + b) / 2), rel=1e-12)
    assert szego({"alpha": -0.5, "beta": -0.5}).D_infinity == pytest.approx(math.sqrt(2), rel=1e-15)


def test_dinf_scales_with_sqrt_c():
    s1 = szego(generic())
    s2 = szego(validate({"alpha": 0.3, "beta": -0.2, "singularities": [(0.5, 0.3)], "h": 9.0 * EXP20}))
    assert s2.D_infinity == pytest.approx(3 * s1.D_infinity, rel=1e-13)


def test_dinf_is_limit():
    sz = szego(two_sing())
    z = 1e7 * np.exp(0.3j)
    assert abs(sz.D(z) - sz.D_infinity) < 1e-6


def test_d_boundary_identities():
    spec = two_sing()
    sz = szego(spec)
    x = np.linspace(-0.97, 0.97, 41)
    x = x[np.abs(x[:, None] - spec.xs).min(axis=1) > 1e-3]
    w = eval_weight(spec, x)
    np.testing.assert_allclose(sz.D_plus(x) * sz.D_minus(x), w, rtol=1e-12)
    np.testing.assert_allclose(np.abs(sz.D_plus(x)) ** 2, w, rtol=1e-12)


def test_d_analytic_integral_form():
    # D(z) against the defining integral done by brute-force Gauss-Chebyshev
    spec = generic()
    sz = szego(spec)
    z = 0.2 + 0.7j
    m = 4000
    t = np.cos(np.pi * (np.arange(m) + 0.5) / m)
    integral = np.pi / m * np.sum(np.log(spec.h(t)) / (z - t))
    root = sqrt_z2m1(z)
    ph = phi_map(z)
    logD = (0.3 / 2 * np.log(z - 1) - 0.2 / 2 * np.log(z + 1) + 0.3 * np.log(z - 0.5)
            - (0.1 + 0.6) / 2 * np.log(ph) + root / (2 * np.pi) * integral)
    assert abs(sz.D(z) - np.exp(logD)) < 1e-12


def test_d_on_interval_raises():
    with pytest.raises(DomainError):
        szego(generic()).D(0.3)


def test_boundary_phase_and_phi_identity():
    spec = two_sing()
    sz = szego(spec)
    for nu in range(0, spec.n_sing + 1):
        pts = np.concatenate(([-1.0], spec.xs, [1.0]))
        x = np.linspace(pts[nu], pts[nu + 1], 9)[1:-1]
        np.testing.assert_allclose(np.angle(sz.D_plus(x)), -sz.psi(nu, x), atol=1e-12)
    for nu in range(1, spec.n_sing + 1):
        x = spec.xs[nu - 1]
        lam = spec.lams[nu - 1]
        assert phase_phi(spec, nu) == pytest.approx(lam * math.pi - 2 * sz.psi(nu, x), abs=1e-12)


# -- residue matrices -------------------------------------------------------------------

def test_residue_structure():
    spec = two_sing()
    res = residues(spec)
    for nu in (1, 2):
        for n in (3, 17, 80):
            C = res.Cmat(nu, n)
            assert abs(np.trace(C)) < 1e-15
    zero = residues(validate({"alpha": 0.5, "beta": 0.1}))
    assert np.abs(zero.A1mat).max() == 0.0


def test_c11_printed_value():
    spec = generic()
    res = residues(spec)
    n = 12
    x, lam = 0.5, 0.3
    th = 2 * n * math.acos(x) - phase_phi(spec, 1)
    c11 = -0.5 * lam * lam * x + 0.5 * lam * math.sin(th)
    assert res.Cmat(1, n)[0, 0] == pytest.approx(c11, abs=1e-15)
    with pytest.raises(IndexError):
        res.Cmat(2, n)


@pytest.mark.parametrize("spec", [generic(), two_sing(), validate({"alpha": 0.7, "beta": -0.6})])
def test_first_order_assembly(spec):
    res = residues(spec)
    for n in (1, 5, 40, 333):
        assert an_sq_first_order(spec, n, res) == pytest.approx(0.25 + A1(spec, n) / n, abs=1e-14)
        assert b_first_order(spec, n, res) == pytest.approx(B1(spec, n) / n, abs=1e-14)


def test_endpoint_only_reduces_to_quarter():
    spec = validate({"alpha": 0.7, "beta": -0.6, "h": [1.3, 0.2]})
    assert an_sq_first_order(spec, 25) == pytest.approx(0.25, abs=1e-16)
    assert abs(b_first_order(spec, 25)) < 1e-16
