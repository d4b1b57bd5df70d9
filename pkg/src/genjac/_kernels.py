"""Hot inner loops, compiled with numba when available.

Set ``GENJAC_BACKEND=numpy`` to force the pure numpy/python versions (useful
for debugging and for the benchmark in ``benchmarks/``).  Both backends
implement the same arithmetic, so results agree to rounding.
"""
import os

import numpy as np

_requested = os.environ.get("GENJAC_BACKEND", "numba").strip().lower()

try:
    if _requested == "numpy":
        raise ImportError
    from numba import njit
    BACKEND = "numba"
except ImportError:  # pragma: no cover - exercised through the env flag
    BACKEND = "numpy"


# -- Clenshaw summation of a Chebyshev-T series ---------------------------------

def _clenshaw_loop(coeffs, x):
    out = np.empty(x.shape[0])
    d = coeffs.shape[0]
    for j in range(x.shape[0]):
        t = x[j]
        b1 = 0.0
        b2 = 0.0
        for k in range(d - 1, 0, -1):
            b1, b2 = coeffs[k] + 2.0 * t * b1 - b2, b1
        out[j] = coeffs[0] + t * b1 - b2
    return out


def _clenshaw_numpy(coeffs, x):
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for k in range(coeffs.shape[0] - 1, 0, -1):
        b1, b2 = coeffs[k] + 2.0 * x * b1 - b2, b1
    return coeffs[0] + x * b1 - b2


# -- implicit-shift QL on a symmetric tridiagonal matrix -------------------------

def _tridiag_ql(diag, offdiag, max_sweeps):
    """Eigenvalues and first eigenvector components of a symmetric tridiagonal.

    ``offdiag[i]`` couples rows i and i+1.  Only the first row of the
    eigenvector matrix is accumulated, which is all Golub-Welsch needs.
    Returns (eigenvalues, first_components, status); status is 0 on success
    and 1 if some eigenvalue needed more than ``max_sweeps`` iterations.
    """
    n = diag.shape[0]
    d = diag.copy()
    e = np.zeros(n)
    for i in range(n - 1):
        e[i] = offdiag[i]
    z = np.zeros(n)
    z[0] = 1.0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= 2.2e-16 * dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_sweeps:
                return d, z, 1
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, z, 0


# -- discretized Stieltjes sweep -------------------------------------------------

# ||pi_{k+1}||^2 / ||pi_k||^2 = a_{k+1}^2 is O(1) for measures on [-1, 1];
# anything this small is rounding noise from a degenerate discretization
NORM_FLOOR = 1e-26

def _stieltjes_loop(x, w, N):
    """Recurrence coefficients of the discrete measure sum_j w_j delta(x_j).

    The monic polynomials are renormalized at every step (q_k = pi_k/||pi_k||)
    so that nothing underflows for large N; the ratios that define a_k and b_k
    are unaffected.  Returns (a[0..N], b[0..N], status) with a[0] = sqrt(mu0).
    status = k+1 if the norm of pi_k was not positive, where a norm at
    rounding level (below NORM_FLOOR, relative to unit-normalized q's) or a
    degree at or above the number of nodes counts as not positive.
    """
    M = x.shape[0]
    a = np.zeros(N + 1)
    b = np.zeros(N + 1)
    q_prev = np.zeros(M)
    q = np.empty(M)
    mu0 = 0.0
    for j in range(M):
        mu0 += w[j]
    if not mu0 > 0.0:
        return a, b, 1
    a[0] = np.sqrt(mu0)
    for j in range(M):
        q[j] = 1.0 / a[0]
    for k in range(N + 1):
        s = 0.0
        for j in range(M):
            s += w[j] * x[j] * q[j] * q[j]
        b[k] = s
        if k == N:
            break
        nrm = 0.0
        for j in range(M):
            r = (x[j] - s) * q[j] - a[k] * q_prev[j] if k > 0 else (x[j] - s) * q[j]
            q_prev[j] = r
            nrm += w[j] * r * r
        if not nrm > NORM_FLOOR or k + 1 >= M:
            return a, b, k + 2
        ak = np.sqrt(nrm)
        a[k + 1] = ak
        for j in range(M):
            tmp = q[j]
            q[j] = q_prev[j] / ak
            q_prev[j] = tmp
    return a, b, 0


def _stieltjes_numpy(x, w, N):
    a = np.zeros(N + 1)
    b = np.zeros(N + 1)
    mu0 = w.sum()
    if not mu0 > 0.0:
        return a, b, 1
    a[0] = np.sqrt(mu0)
    q_prev = np.zeros_like(x)
    q = np.full_like(x, 1.0 / a[0])
    for k in range(N + 1):
        b[k] = np.dot(w * q, x * q)
        if k == N:
            break
        r = (x - b[k]) * q - a[k] * q_prev
        nrm = np.dot(w * r, r)
        if not nrm > NORM_FLOOR or k + 1 >= x.shape[0]:
            return a, b, k + 2
        a[k + 1] = np.sqrt(nrm)
        q_prev, q = q, r / a[k + 1]
    return a, b, 0


if BACKEND == "numba":
    clenshaw = njit(cache=True)(_clenshaw_loop)
    tridiag_ql = njit(cache=True)(_tridiag_ql)
    stieltjes_sweep = njit(cache=True)(_stieltjes_loop)
else:
    clenshaw = _clenshaw_numpy
    tridiag_ql = _tridiag_ql
    stieltjes_sweep = _stieltjes_numpy

# the un-jitted versions, for benchmarking and cross-checks
numpy_versions = {
    "clenshaw": _clenshaw_numpy,
    "tridiag_ql": _tridiag_ql,
    "stieltjes_sweep": _stieltjes_numpy,
}
