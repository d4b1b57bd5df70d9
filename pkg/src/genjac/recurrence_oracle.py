"""Ground-truth recurrence coefficients from orthogonality.

The orthonormal polynomials satisfy

    x p_n(x) = a_{n+1} p_{n+1}(x) + b_n p_n(x) + a_n p_{n-1}(x).
"""
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, PrecisionError
from .quadrature import composite_rule, default_nodes, jacobi_recurrence
from .weight_model import validate

__all__ = [
    "RecurrenceTable", "stieltjes", "jacobi_closed_form", "orthonormal_eval",
    "orthonormal_values", "gram_residual", "csv_text",
]


@dataclass(frozen=True)
class RecurrenceTable:
    """a[n-1] = a_n for n = 1..N, b[n] = b_n for n = 0..N-1, gamma[n] for n = 0..N."""

    N: int
    a: np.ndarray
    b: np.ndarray
    mu0: float
    gamma: np.ndarray

    def a_n(self, n):
        return float(self.a[n - 1])

    def b_n(self, n):
        return float(self.b[n])


def stieltjes(spec, N, nodes=None):
    """Discretized Stieltjes procedure on the singularity-splitting rule.

    ``nodes`` is the Gauss-Jacobi size per subinterval; the default is
    exact for every integrand the sweep forms, up to rounding.
    """
    spec = validate(spec)
    N = int(N)
    if N < 1:
        raise ValueError("N must be at least 1")
    m = default_nodes(spec, N) if nodes is None else int(nodes)
    x, w = composite_rule(spec, m)
    a, b, status = _kernels.stieltjes_sweep(x, w, N)
    if status:
        raise PrecisionError(
            f"discrete norm of pi_{status - 1} is not positive; "
            f"{m} nodes per subinterval are too few for N={N}")
    mu0 = a[0] ** 2
    an = a[1:].copy()
    gamma = np.empty(N + 1)
    gamma[0] = 1.0 / math.sqrt(mu0)
    np.divide(gamma[0], np.cumprod(an), out=gamma[1:])
    return RecurrenceTable(N, an, b[:N].copy(), float(mu0), gamma)


def jacobi_closed_form(alpha, beta, n):
    """(a_n, b_n) for the pure Jacobi weight; a_n is None when n == 0."""
    if not (alpha > -1.0 and beta > -1.0):
        raise DomainError("Jacobi exponents must exceed -1")
    n = int(n)
    if n < 0:
        raise ValueError("n must be non-negative")
    diag, off = jacobi_recurrence(alpha, beta, n + 1)
    a = float(off[n - 1]) if n >= 1 else None
    return a, float(diag[n])


def orthonormal_values(table, n, x):
    """p_0..p_n at x (array), by forward recurrence.  Shape (n+1,) + x.shape."""
    if n > table.N:
        raise IndexError(f"degree {n} exceeds table size {table.N}")
    x = np.asarray(x, dtype=float)
    out = np.empty((n + 1,) + x.shape)
    out[0] = 1.0 / math.sqrt(table.mu0)
    if n >= 1:
        out[1] = (x - table.b[0]) * out[0] / table.a[0]
    for k in range(1, n):
        out[k + 1] = ((x - table.b[k]) * out[k] - table.a[k - 1] * out[k - 1]) / table.a[k]
    return out


def orthonormal_eval(table, n, x):
    v = orthonormal_values(table, n, x)[n]
    return float(v) if v.ndim == 0 else v


def gram_residual(table, spec, K, nodes=None):
    """max over i <= j <= K of |<p_i, p_j> - delta_ij|."""
    if K > table.N:
        raise IndexError(f"K={K} exceeds table size {table.N}")
    m = default_nodes(spec, K) if nodes is None else int(nodes)
    x, w = composite_rule(spec, m)
    P = orthonormal_values(table, K, x)
    G = (P * w) @ P.T
    return float(np.abs(G - np.eye(K + 1)).max())


def csv_text(table, nmin=1, nmax=None):
    """``n,a_n,b_n`` rows for nmin <= n <= nmax (needs nmax < table.N)."""
    nmax = table.N - 1 if nmax is None else nmax
    if nmax >= table.N:
        raise IndexError("b_n is only tabulated for n < N")
    lines = ["n,a_n,b_n"]
    for n in range(nmin, nmax + 1):
        lines.append(f"{n},{table.a[n - 1]:.17g},{table.b[n]:.17g}")
    return "\n".join(lines) + "\n"
