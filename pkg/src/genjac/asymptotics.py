"""Explicit 1/n corrections to the recurrence coefficients, and their ingredients.

Singular points are indexed from 1, in increasing order of position.
"""
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .weight_model import ChebSeries, eval_weight, log_h_series, validate

__all__ = [
    "pv_log_h_integral", "pv_log_h_integral_quadrature", "phase_phi", "phases",
    "A1", "B1", "predict", "AsymptoticPrediction", "SzegoData", "szego",
    "ResidueSet", "residues", "an_sq_first_order", "b_first_order",
    "conjugate_by_dinf", "phi_map", "sqrt_z2m1",
]


# -- principal-value Hilbert transform of log h ---------------------------------

def _cheb_u_sum(d, x):
    """sum_j d[j] U_j(x) by Clenshaw."""
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for k in range(len(d) - 1, -1, -1):
        b1, b2 = d[k] + 2.0 * x * b1 - b2, b1
    return b1


def pv_log_h_integral(logh, x):
    """PV integral of log h(t) / (sqrt(1 - t^2) (t - x)) over (-1, 1).

    Uses PV int T_k(t) / (sqrt(1-t^2) (t-x)) dt = pi U_{k-1}(x) (zero for k = 0).
    """
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) >= 1.0):
        raise DomainError("principal value is taken inside (-1, 1) only")
    c = np.asarray(logh.coeffs, dtype=float)
    val = math.pi * _cheb_u_sum(c[1:], xa) if len(c) > 1 else np.zeros_like(xa)
    return float(val) if np.ndim(val) == 0 else val


def pv_log_h_integral_quadrature(logh, x, nodes=2000):
    """Same integral by singularity subtraction and Gauss-Chebyshev (test oracle).

    PV int g/(sqrt(1-t^2)(t-x)) = int (g(t)-g(x))/(sqrt(1-t^2)(t-x)) dt, because
    the PV integral of 1/(sqrt(1-t^2)(t-x)) vanishes.
    """
    if abs(x) >= 1.0:
        raise DomainError("principal value is taken inside (-1, 1) only")
    t = np.cos(np.pi * (np.arange(nodes) + 0.5) / nodes)
    gx = logh(x)
    diff = t - x
    # guard against a node landing on x (removable)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = (logh(t) - gx) / diff
    bad = np.abs(diff) < 1e-12
    if np.any(bad):
        eps = 1e-6
        q[bad] = (logh(x + eps) - logh(x - eps)) / (2 * eps)
    return float(math.pi / nodes * q.sum())


# -- phases and oscillatory coefficients ---------------------------------------

def _logh(spec):
    return log_h_series(spec)


def phase_phi(spec, nu, logh=None):
    """Phase constant of singularity nu (1-based)."""
    spec = validate(spec)
    if not 1 <= nu <= spec.n_sing:
        raise IndexError(f"singularity index {nu} out of range 1..{spec.n_sing}")
    logh = _logh(spec) if logh is None else logh
    lams = spec.lams
    x = spec.xs[nu - 1]
    lam = lams[nu - 1]
    tail = 2.0 * lams[nu:].sum()
    total = spec.alpha + spec.beta + 2.0 * lams.sum()
    pv = pv_log_h_integral(logh, x)
    return ((spec.alpha + lam + tail) * math.pi - total * math.acos(x)
            - math.sqrt(1.0 - x * x) / math.pi * pv)


def phases(spec):
    spec = validate(spec)
    logh = _logh(spec)
    return np.array([phase_phi(spec, nu, logh) for nu in range(1, spec.n_sing + 1)])


def _osc(spec, n, shift, scale, phi=None):
    spec = validate(spec)
    n = np.asarray(n, dtype=float)
    phi = phases(spec) if phi is None else phi
    out = np.zeros_like(n)
    for x, lam, ph in zip(spec.xs, spec.lams, phi):
        th = math.acos(x)
        out = out - scale * lam * math.sqrt(1.0 - x * x) * np.cos((2.0 * n + shift) * th - ph)
    return float(out) if out.ndim == 0 else out


def A1(spec, n, phi=None):
    """-1/2 sum lam sqrt(1-x^2) cos(2n arccos x - Phi); n may be an array."""
    return _osc(spec, n, 0.0, 0.5, phi)


def B1(spec, n, phi=None):
    """-sum lam sqrt(1-x^2) cos((2n+1) arccos x - Phi); n may be an array."""
    return _osc(spec, n, 1.0, 1.0, phi)


@dataclass(frozen=True)
class AsymptoticPrediction:
    phases: np.ndarray
    A1: Callable
    B1: Callable

    def a(self, n):
        return 0.5 + self.A1(n) / np.asarray(n, dtype=float)

    def b(self, n):
        return self.B1(n) / np.asarray(n, dtype=float)


def prediction(spec):
    spec = validate(spec)
    phi = phases(spec)
    return AsymptoticPrediction(phi, lambda n: A1(spec, n, phi), lambda n: B1(spec, n, phi))


def predict(spec, n):
    """(a_pred, b_pred) = (1/2 + A1(n)/n, B1(n)/n)."""
    p = prediction(spec)
    return p.a(n), p.b(n)


# -- Szego function -------------------------------------------------------------

def sqrt_z2m1(z):
    """(z-1)^(1/2) (z+1)^(1/2) with principal branches; ~ z at infinity."""
    return np.sqrt(z - 1.0) * np.sqrt(z + 1.0)


def phi_map(z):
    """phi(z) = z + (z^2-1)^(1/2), mapping the slit plane onto |phi| > 1."""
    return z + sqrt_z2m1(z)


def _boundary(x, side):
    """x + i*0 with the sign of zero selecting the side of the cut."""
    z = np.array(x, dtype=complex)
    z.imag = math.copysign(0.0, side)
    return z


def _on_interval(z):
    z = np.asarray(z, dtype=complex)
    return np.any((z.imag == 0.0) & (np.abs(z.real) <= 1.0))


@dataclass(frozen=True)
class SzegoData:
    spec: object
    logh: ChebSeries
    D_infinity: float

    def _eval(self, z):
        s = self.spec
        z = np.asarray(z, dtype=complex)
        total = (s.alpha + s.beta + 2.0 * s.lams.sum()) / 2.0
        logD = 0.5 * s.alpha * np.log(z - 1.0) + 0.5 * s.beta * np.log(z + 1.0)
        for x, lam in s.singularities:
            logD = logD + lam * np.log(z - x)
        # exact form of (sqrt(z^2-1)/2pi) int log h(t)/(sqrt(1-t^2)(z-t)) dt
        # for log h = sum c_k T_k:  (1/2) sum c_k phi(z)^(-k)
        ph = phi_map(z)
        logph = np.log(ph)
        c = np.asarray(self.logh.coeffs)
        inv = 1.0 / ph
        acc = np.zeros_like(z)
        for k in range(len(c) - 1, -1, -1):
            acc = acc * inv + c[k]
        logD = logD - total * logph + 0.5 * acc
        out = np.exp(logD)
        return complex(out) if out.ndim == 0 else out

    def D(self, z):
        """D(z) for z off [-1, 1]."""
        if _on_interval(z):
            raise DomainError("D is analytic off [-1, 1]; use D_plus/D_minus on the interval")
        return self._eval(z)

    def D_plus(self, x):
        """Boundary value from the upper half-plane."""
        return self._eval(_boundary(x, 1.0))

    def D_minus(self, x):
        """Boundary value from the lower half-plane."""
        return self._eval(_boundary(x, -1.0))

    def psi(self, nu, x):
        """Boundary phase on (x_nu, x_{nu+1}): D_+(x) = sqrt(w(x)) exp(-i psi_nu(x)).

        Sign convention: psi_nu(x) = -(1/2)[(alpha + sum_{k>nu} 2 lam_k) pi
        - (alpha + beta + sum_k 2 lam_k) arccos x - sqrt(1-x^2)/pi * PV(x)],
        PV(x) being pv_log_h_integral(log h, x).  nu = 0 is the piece left of x_1.
        """
        s = self.spec
        x = np.asarray(x, dtype=float)
        lams = s.lams
        tail = 2.0 * lams[nu:].sum()
        total = s.alpha + s.beta + 2.0 * lams.sum()
        pv = pv_log_h_integral(self.logh, x)
        out = -0.5 * ((s.alpha + tail) * math.pi - total * np.arccos(x)
                      - np.sqrt(1.0 - x * x) / math.pi * pv)
        return float(out) if np.ndim(out) == 0 else out

    def piece(self, x):
        """Index nu with x in (x_nu, x_{nu+1}) (x_0 = -1, x_{n0+1} = 1)."""
        return int(np.searchsorted(self.spec.xs, x))


def szego(spec, logh=None):
    spec = validate(spec)
    logh = log_h_series(spec) if logh is None else logh
    # (1/2pi) int log h / sqrt(1-t^2) dt = c_0 / 2
    total = spec.alpha + spec.beta + 2.0 * spec.lams.sum()
    dinf = 2.0 ** (-total / 2.0) * math.exp(0.5 * logh.coeffs[0])
    return SzegoData(spec, logh, dinf)


# -- residue matrices of the first correction -------------------------------------

def conjugate_by_dinf(M, dinf):
    """D^{sigma3} M D^{-sigma3}."""
    M = np.array(M, dtype=complex)
    M[0, 1] *= dinf * dinf
    M[1, 0] /= dinf * dinf
    return M


def _c_entries(x, lam, phi, n):
    th = 2.0 * n * math.acos(x) - phi
    r = math.sqrt(1.0 - x * x)
    c11 = -0.5 * lam * lam * x + 0.5 * lam * math.sin(th)
    c12 = 0.5j * lam * lam - 0.5j * lam * x * math.sin(th) - 0.5j * lam * r * math.cos(th)
    c21 = 0.5j * lam * lam - 0.5j * lam * x * math.sin(th) + 0.5j * lam * r * math.cos(th)
    return c11, c12, c21


@dataclass(frozen=True)
class ResidueSet:
    A1mat: np.ndarray
    B1mat: np.ndarray
    Cmat: Callable
    D_infinity: float
    n_sing: int


def residues(spec):
    spec = validate(spec)
    sz = szego(spec)
    dinf = sz.D_infinity
    phi = phases(spec)
    a = (4.0 * spec.alpha ** 2 - 1.0) / 16.0
    b = (4.0 * spec.beta ** 2 - 1.0) / 16.0
    Am = conjugate_by_dinf(a * np.array([[-1.0, 1j], [1j, 1.0]]), dinf)
    Bm = conjugate_by_dinf(b * np.array([[1.0, 1j], [1j, -1.0]]), dinf)
    xs, lams = spec.xs, spec.lams

    def Cmat(nu, n):
        if not 1 <= nu <= spec.n_sing:
            raise IndexError(f"singularity index {nu} out of range")
        c11, c12, c21 = _c_entries(xs[nu - 1], lams[nu - 1], phi[nu - 1], n)
        return conjugate_by_dinf([[c11, c12], [c21, -c11]], dinf)

    return ResidueSet(Am, Bm, Cmat, dinf, spec.n_sing)


def an_sq_first_order(spec, n, res=None):
    """1/4 + (1/2i)[D^-2 (A12 + B12 + sum C12) - D^2 (A21 + B21 + sum C21)] / n."""
    res = residues(spec) if res is None else res
    d2 = res.D_infinity ** 2
    s12 = res.A1mat[0, 1] + res.B1mat[0, 1]
    s21 = res.A1mat[1, 0] + res.B1mat[1, 0]
    for nu in range(1, res.n_sing + 1):
        Cm = res.Cmat(nu, n)
        s12 += Cm[0, 1]
        s21 += Cm[1, 0]
    val = (s12 / d2 - d2 * s21) / 2j
    return 0.25 + val.real / n


def b_first_order(spec, n, res=None):
    """-(A11 + A22 + B11 + B22 + sum [C11(n+1) + C22(n)]) / n."""
    res = residues(spec) if res is None else res
    tot = res.A1mat[0, 0] + res.A1mat[1, 1] + res.B1mat[0, 0] + res.B1mat[1, 1]
    for nu in range(1, res.n_sing + 1):
        tot += res.Cmat(nu, n + 1)[0, 0] + res.Cmat(nu, n)[1, 1]
    return -tot.real / n
