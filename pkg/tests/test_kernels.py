import os
import subprocess
import sys

import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

from genjac import _kernels
from genjac.quadrature import composite_rule, jacobi_recurrence
from genjac.weight_model import validate

ref = _kernels.numpy_versions


def test_backend_flag_value():
    assert _kernels.BACKEND in ("numba", "numpy")


def test_clenshaw_parity():
    rng = np.random.default_rng(0)
    c = rng.normal(size=30)
    x = rng.uniform(-1, 1, 500)
    a = _kernels.clenshaw(c, x)
    b = ref["clenshaw"](c, x)
    np.testing.assert_allclose(a, b, atol=1e-13)
    np.testing.assert_allclose(a, np.polynomial.chebyshev.chebval(x, c), atol=1e-13)


def test_tridiag_ql_parity_and_scipy():
    d, e = jacobi_recurrence(0.4, -0.3, 60)
    x1, z1, s1 = _kernels.tridiag_ql(d.copy(), e.copy(), 50)
    x2, z2, s2 = ref["tridiag_ql"](d.copy(), e.copy(), 50)
    assert s1 == 0 and s2 == 0
    np.testing.assert_allclose(np.sort(x1), np.sort(x2), atol=1e-15)
    lam, vec = eigh_tridiagonal(d, e)
    np.testing.assert_allclose(np.sort(x1), lam, atol=1e-14)
    o = np.argsort(x1)
    np.testing.assert_allclose(z1[o] ** 2, vec[0] ** 2, atol=1e-14)


def test_ql_reports_non_convergence():
    d, e = jacobi_recurrence(0.0, 0.0, 40)
    _, _, status = _kernels.tridiag_ql(d.copy(), e.copy(), 0)
    assert status != 0


def test_stieltjes_parity():
    spec = validate({"alpha": 0.3, "beta": -0.2, "singularities": [(0.5, 0.3)],
                     "h": np.polynomial.chebyshev.chebinterpolate(np.exp, 20)})
    x, w = composite_rule(spec, 100)
    a1, b1, s1 = _kernels.stieltjes_sweep(x, w, 80)
    a2, b2, s2 = ref["stieltjes_sweep"](x, w, 80)
    assert s1 == s2 == 0
    np.testing.assert_allclose(a1, a2, rtol=1e-13)
    np.testing.assert_allclose(b1, b2, atol=1e-14)


def test_stieltjes_flags_too_few_nodes():
    x, w = composite_rule(validate({"alpha": 0, "beta": 0}), 5)
    _, _, status = _kernels.stieltjes_sweep(x, w, 20)
    assert status != 0


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_backend_env_flag_subprocess(backend):
    code = ("from genjac import _kernels, stieltjes;"
            "t = stieltjes({'alpha': 0.2, 'beta': 0.1}, 30);"
            "print(_kernels.BACKEND); print(repr(float(t.a[-1])))")
    env = dict(os.environ, GENJAC_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    name, val = out.stdout.split()
    assert name == backend
    assert float(val) == pytest.approx(0.5, abs=1e-3)
