"""Gauss-Jacobi rules and singularity-splitting composite quadrature."""
import math
from dataclasses import dataclass
from functools import lru_cache
from threading import Lock

import numpy as np

from . import _kernels
from .errors import ConvergenceError, DomainError
from .weight_model import validate, _factor

__all__ = [
    "QuadRule", "log_beta", "beta_fn", "jacobi_mu0", "jacobi_recurrence",
    "gauss_jacobi", "composite_rule", "inner_product", "default_nodes",
]

MAX_SWEEPS = 50


@dataclass(frozen=True)
class QuadRule:
    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple = (-1.0, 1.0)

    def __len__(self):
        return len(self.nodes)

    def integrate(self, f):
        return float(np.dot(self.weights, f(self.nodes)))


def log_beta(p, q):
    # math.lgamma is a Lanczos approximation (CPython), relative error ~1e-15
    return math.lgamma(p) + math.lgamma(q) - math.lgamma(p + q)


def beta_fn(p, q):
    if p + q < 170.0:
        return math.gamma(p) * math.gamma(q) / math.gamma(p + q)
    return math.exp(log_beta(p, q))


def jacobi_mu0(a, b):
    """Integral of (1-x)**a (1+x)**b over [-1, 1]."""
    return 2.0 ** (a + b + 1.0) * beta_fn(a + 1.0, b + 1.0)


def jacobi_recurrence(a, b, m):
    """Orthonormal Jacobi recurrence: diagonal b_0..b_{m-1}, off-diagonal a_1..a_{m-1}.

    Weight (1-x)**a (1+x)**b.  Removable singularities at n = 0, n = 1,
    a + b = 0 and a + b = -1 are handled by the simplified forms.
    """
    if not (a > -1.0 and b > -1.0):
        raise DomainError("Jacobi exponents must exceed -1")
    n = np.arange(m, dtype=float)
    s = a + b
    diag = np.empty(m)
    diag[0] = (b - a) / (s + 2.0)
    if m > 1:
        k = n[1:]
        diag[1:] = (b * b - a * a) / ((2 * k + s) * (2 * k + s + 2.0))
    off = np.empty(max(m - 1, 0))
    if m > 1:
        off[0] = math.sqrt(4.0 * (1 + a) * (1 + b) / ((2 + s) ** 2 * (3 + s)))
    if m > 2:
        k = n[2:]
        t = 2 * k + s
        off[1:] = np.sqrt(4 * k * (k + a) * (k + b) * (k + s) / (t * t * (t + 1) * (t - 1)))
    return diag, off


_cache = {}
_cache_lock = Lock()


def gauss_jacobi(m, a, b):
    """m-point Gauss rule for the weight (1-x)**a (1+x)**b on (-1, 1)."""
    m = int(m)
    if m < 1:
        raise ValueError("need at least one node")
    key = (m, float(a), float(b))
    rule = _cache.get(key)
    if rule is not None:
        return rule
    with _cache_lock:
        rule = _cache.get(key)
        if rule is None:
            rule = _build_gauss_jacobi(m, float(a), float(b))
            _cache[key] = rule
    return rule


def _build_gauss_jacobi(m, a, b):
    diag, off = jacobi_recurrence(a, b, m)
    mu0 = jacobi_mu0(a, b)
    if m == 1:
        return QuadRule(np.array([diag[0]]), np.array([mu0]))
    x, z0, status = _kernels.tridiag_ql(diag, off, MAX_SWEEPS)
    if status:
        raise ConvergenceError(f"tridiagonal QL exceeded {MAX_SWEEPS} sweeps (m={m})")
    order = np.argsort(x)
    x = x[order]
    w = mu0 * z0[order] ** 2
    if a == b:
        x = 0.5 * (x - x[::-1])
        w = 0.5 * (w + w[::-1])
    return QuadRule(x, w)


def default_nodes(spec, n_max):
    """Nodes per subinterval that integrate degree 2*n_max+1 integrands to rounding."""
    spec = validate(spec)
    return int(n_max) + 16 + math.ceil(spec.h.degree / 2)


def composite_rule(spec, m):
    """Nodes and weights with sum_j W_j f(x_j) ~ integral of f * w over (-1, 1).

    [-1, 1] is split at the singular points.  On each piece the two adjacent
    algebraic factors go into a Gauss-Jacobi weight; everything else (h, the
    remaining factors, the Jacobian) is sampled at the nodes.
    """
    spec = validate(spec)
    pts, exps = _factor(spec)
    xs, ws = [], []
    for i in range(len(pts) - 1):
        lo, hi = pts[i], pts[i + 1]
        e_lo, e_hi = exps[i], exps[i + 1]
        rule = gauss_jacobi(m, e_hi, e_lo)
        half = 0.5 * (hi - lo)
        x = 0.5 * (hi + lo) + half * rule.nodes
        smooth = spec.h(x) * half ** (1.0 + e_lo + e_hi)
        for j, (p, e) in enumerate(zip(pts, exps)):
            if j != i and j != i + 1:
                smooth = smooth * np.abs(x - p) ** e
        xs.append(x)
        ws.append(rule.weights * smooth)
    return np.concatenate(xs), np.concatenate(ws)


def inner_product(f, g, spec, m):
    """Integral of f(x) g(x) w(x) over (-1, 1); f and g take numpy arrays."""
    x, w = composite_rule(spec, m)
    return float(np.dot(w, np.asarray(f(x)) * np.asarray(g(x))))
