"""Local Bessel parametrix near an interior singular point, and numerical checks.

Every check returns data (residuals, sample counts) rather than raising; only
special-function accuracy failures propagate as AccuracyError.

Matrices are 2x2 complex numpy arrays; norms are the max absolute entry.
"""
import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import bessel as bf
from .asymptotics import phase_phi, phi_map, sqrt_z2m1, szego
from .errors import ConvergenceError, DomainError
from .weight_model import log_h_series, validate

__all__ = [
    "SIGMA3", "OFFDIAG", "sigma3_power", "det2", "norm_max", "inv2",
    "psi_region", "psi_lambda", "RAY_JUMPS", "RAY_PLUS_SIDE", "ray_jump",
    "verify_psi_jumps", "psi_zero_behavior", "hankel_symbol",
    "psi_asymptotic_series", "psi_asymptotic_error", "LocalFrame", "local_frame",
    "conformal_f", "gamma_contour", "W_xnu", "N_matrix", "E_nu", "E_n_xnu",
    "E_nu_at_point", "P_matrix", "matching_error", "boundary_points",
    "delta1_residue", "residue_check", "bernstein_rho",
]

SIGMA3 = np.diag([1.0 + 0j, -1.0 + 0j])
OFFDIAG = np.array([[0, 1], [-1, 0]], dtype=complex)
_HALF_PI_SQRT = 0.5 * math.sqrt(math.pi)
_SQRT_PI = math.sqrt(math.pi)
_L = np.array([[1, -1j], [-1j, 1]]) / math.sqrt(2.0)
_L_INV = np.array([[1, 1j], [1j, 1]]) / math.sqrt(2.0)


def sigma3_power(c):
    """c**sigma3 = diag(c, 1/c) for a complex scalar c."""
    return np.array([[c, 0], [0, 1.0 / c]], dtype=complex)


def _exp_sigma3(theta):
    """exp(i theta sigma3)."""
    return np.array([[cmath.exp(1j * theta), 0], [0, cmath.exp(-1j * theta)]])


def det2(M):
    return M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]


def inv2(M):
    d = det2(M)
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]]) / d


def norm_max(M):
    return float(np.abs(M).max())


# -- the model problem in the zeta-plane -------------------------------------------

def psi_region(zeta):
    """Sector 1..8 (I..VIII) of zeta; sector k spans ((k-1) pi/4, k pi/4).

    A point on a ray belongs to the sector counterclockwise of it.
    """
    zeta = complex(zeta)
    if zeta == 0:
        raise DomainError("Psi is evaluated away from the origin")
    th = math.atan2(zeta.imag, zeta.real)
    if th < 0.0:
        th += 2.0 * math.pi
    k = int(th // (math.pi / 4.0)) + 1
    return min(max(k, 1), 8)


def psi_lambda(lam, zeta, region=None):
    """Psi_lambda(zeta) by the explicit Bessel/Hankel formula of its sector.

    ``region`` forces the formula of a given sector (1..8); it is how the two
    one-sided boundary values on a ray are obtained, since each formula
    continues analytically across the rays bounding its sector.
    """
    lam = float(lam)
    if not lam > -0.5:
        raise DomainError("Psi_lambda needs lambda > -1/2")
    zeta = complex(zeta)
    r = psi_region(zeta) if region is None else int(region)
    vp, vm = lam + 0.5, lam - 0.5
    if r in (1, 8):
        s = _HALF_PI_SQRT * cmath.sqrt(zeta)
        h1p, h1m = bf.hankel1(vp, zeta), bf.hankel1(vm, zeta)
        h2p, h2m = bf.hankel2(vp, zeta), bf.hankel2(vm, zeta)
        if r == 1:
            M = s * np.array([[h2p, -1j * h1p], [h2m, -1j * h1m]])
            return M @ _exp_sigma3(-(lam + 0.25) * math.pi)
        M = s * np.array([[-1j * h1p, -h2p], [-1j * h1m, -h2m]])
        return M @ _exp_sigma3((lam + 0.25) * math.pi)
    if r in (4, 5):
        w = -zeta
        s = _HALF_PI_SQRT * cmath.sqrt(w)
        h1p, h1m = bf.hankel1(vp, w), bf.hankel1(vm, w)
        h2p, h2m = bf.hankel2(vp, w), bf.hankel2(vm, w)
        if r == 4:
            M = s * np.array([[1j * h1p, -h2p], [-1j * h1m, h2m]])
            return M @ _exp_sigma3((lam + 0.25) * math.pi)
        M = s * np.array([[-h2p, -1j * h1p], [h2m, 1j * h1m]])
        return M @ _exp_sigma3(-(lam + 0.25) * math.pi)
    sq = cmath.sqrt(zeta)
    if r in (2, 3):
        w = -1j * zeta
        ip, im = bf.besseli(vp, w), bf.besseli(vm, w)
        kp, km = bf.besselk(vp, w), bf.besselk(vm, w)
        M = sq * np.array([[_SQRT_PI * ip, -kp / _SQRT_PI],
                           [-1j * _SQRT_PI * im, -1j * km / _SQRT_PI]])
        return M @ _exp_sigma3((-0.5 if r == 2 else 0.5) * lam * math.pi)
    w = 1j * zeta
    ip, im = bf.besseli(vp, w), bf.besseli(vm, w)
    kp, km = bf.besselk(vp, w), bf.besselk(vm, w)
    M = sq * np.array([[-1j * _SQRT_PI * ip, -1j * kp / _SQRT_PI],
                       [_SQRT_PI * im, -km / _SQRT_PI]])
    return M @ _exp_sigma3((-0.5 if r == 6 else 0.5) * lam * math.pi)


def ray_jump(lam, k):
    """Printed jump matrix on ray Gamma_k (k = 1..8)."""
    k = (k - 1) % 4 + 1
    if k == 1:
        return OFFDIAG.copy()
    if k == 2:
        return np.array([[1, 0], [cmath.exp(-2j * math.pi * lam), 1]])
    if k == 3:
        return _exp_sigma3(lam * math.pi)
    return np.array([[1, 0], [cmath.exp(2j * math.pi * lam), 1]])


RAY_JUMPS = {k: (lambda lam, k=k: ray_jump(lam, k)) for k in range(1, 9)}

# Which side of ray Gamma_k carries the "+" boundary value: "ccw" means the
# sector counterclockwise of the ray (sector k), "cw" the sector before it.
# Fixed by requiring the printed jumps to hold for the printed formulas: rays
# 1, 2, 3, 7, 8 point away from the origin, rays 4, 5, 6 point towards it
# (every ray is traversed left to right).
RAY_PLUS_SIDE = {1: "ccw", 2: "ccw", 3: "ccw", 4: "cw",
                 5: "cw", 6: "cw", 7: "ccw", 8: "ccw"}


def _ray_sides(lam, k, r):
    theta = (k - 1) * math.pi / 4.0
    zeta = cmath.rect(r, theta)
    ccw = psi_lambda(lam, zeta, region=k)
    cw = psi_lambda(lam, zeta, region=(k - 2) % 8 + 1)
    return ccw, cw


def _jump_residual(plus, minus, J):
    scale = max(1.0, norm_max(minus), norm_max(plus))
    return norm_max(plus - minus @ J) / scale


def verify_psi_jumps(lam, radii=(0.5, 2.0, 10.0, 40.0), orientation=None):
    """Max over radii of the relative residual |Psi_+ - Psi_- J| / |Psi| per ray.

    Returns {ray: residual}.  Residuals are scaled by the size of Psi because
    its entries grow like exp(|Im zeta|) on some rays.
    """
    orientation = RAY_PLUS_SIDE if orientation is None else orientation
    out = {}
    for k in range(1, 9):
        J = ray_jump(lam, k)
        worst = 0.0
        for r in radii:
            ccw, cw = _ray_sides(lam, k, r)
            plus, minus = (ccw, cw) if orientation[k] == "ccw" else (cw, ccw)
            worst = max(worst, _jump_residual(plus, minus, J))
        out[k] = worst
    return out


def psi_zero_behavior(lam, radii=(1e-3, 1e-4), angle=3 * math.pi / 8):
    """Entries of Psi near 0 in sector II, each column rescaled by its expected power.

    For lambda > 0 the first column is O(|zeta|^lam) and the second
    O(|zeta|^-lam); returns max |Psi_j1| |zeta|^-lam and max |Psi_j2| |zeta|^lam
    for every radius.
    """
    rows = []
    for r in radii:
        P = psi_lambda(lam, cmath.rect(r, angle))
        rows.append((r, float(np.abs(P[:, 0]).max() * r ** -lam),
                     float(np.abs(P[:, 1]).max() * r ** lam)))
    return rows


def hankel_symbol(nu, k):
    """(nu, k) = prod_{j=1..k} (4 nu^2 - (2j-1)^2) / (2^(2k) k!)."""
    val = 1.0
    for j in range(1, k + 1):
        val *= (4.0 * nu * nu - (2 * j - 1) ** 2) / (4.0 * j)
    return val


def _bracket(lam, zeta, k):
    S = np.eye(2, dtype=complex)
    for j in range(1, k + 1):
        a, b = hankel_symbol(lam + 0.5, j), hankel_symbol(lam - 0.5, j)
        s, t = a + b, a - b
        sg = (-1) ** j
        S = S + (1j ** j) / (2 ** (j + 1) * zeta ** j) * np.array(
            [[sg * s, -1j * t], [1j * sg * t, s]])
    return S


def _outer_factor(lam, zeta):
    """Right factor e^{pi i sigma3/4} e^{-i zeta sigma3} e^{+-lam pi i sigma3/2} (J0)."""
    q = (zeta.imag >= 0, zeta.real >= 0)
    sgn = -0.5 if q in ((True, True), (False, True)) else 0.5
    F = _exp_sigma3(math.pi / 4) @ _exp_sigma3(-zeta) @ _exp_sigma3(sgn * lam * math.pi)
    if zeta.imag < 0:
        F = F @ np.array([[0, -1], [1, 0]], dtype=complex)
    return F


def psi_asymptotic_series(lam, zeta, k):
    """Quadrant-wise large-zeta expansion of Psi truncated after order k."""
    zeta = complex(zeta)
    return _L @ _bracket(lam, zeta, k) @ _outer_factor(lam, zeta)


def psi_asymptotic_error(lam, zeta, k_max=2):
    """[|L^-1 Psi F^-1 - S_k| for k = 0..k_max] with F the exponential outer factor."""
    zeta = complex(zeta)
    P = psi_lambda(lam, zeta)
    M = _L_INV @ P @ inv2(_outer_factor(lam, zeta))
    return [norm_max(M - _bracket(lam, zeta, k)) for k in range(k_max + 1)]


# -- local frame near x_nu ----------------------------------------------------------

def bernstein_rho(series, floor=1e-14):
    """Estimated Bernstein-ellipse parameter of a Chebyshev series (inf if entire-like)."""
    c = np.abs(np.asarray(series.coeffs))
    if len(c) < 4 or c.max() == 0:
        return math.inf
    k = np.nonzero(c > floor * c.max())[0]
    if len(k) < 4:
        return math.inf
    kk = k[len(k) // 2:]
    if len(kk) < 2:
        return math.inf
    slope = np.polyfit(kk, np.log(c[kk]), 1)[0]
    if slope >= 0:
        return 1.0
    # super-geometric decay (entire h) shows up as a steep fitted slope
    return math.exp(-slope) if slope > -8 else math.inf


@dataclass(frozen=True)
class LocalFrame:
    spec: object
    nu: int
    delta: float
    x: float
    lam: float
    szego: object
    Phi: float

    @property
    def phi_plus(self):
        return cmath.exp(1j * math.acos(self.x))


def _min_gap(spec, nu):
    pts = np.concatenate(([-1.0], spec.xs, [1.0]))
    return float(min(np.diff(pts).min(), 2.0))


def local_frame(spec, nu=1, delta=None):
    """Frame for singularity nu (1-based) with disk radius delta.

    The default radius is 0.4 times the smallest gap between consecutive
    singular points (endpoints included), further limited by the
    analyticity of h.  Disks must not overlap: delta < gap/2.
    """
    spec = validate(spec)
    if not 1 <= nu <= spec.n_sing:
        raise IndexError(f"singularity index {nu} out of range 1..{spec.n_sing}")
    gap = _min_gap(spec, nu)
    if delta is None:
        delta = 0.4 * gap
        rho = bernstein_rho(spec.h)
        if math.isfinite(rho):
            delta = min(delta, 0.25 * (rho - 1.0 / rho))
    delta = float(delta)
    if not 0.0 < delta < 0.5 * gap:
        raise DomainError(f"disk radius {delta} must lie in (0, {0.5 * gap}) so disks stay disjoint")
    logh = log_h_series(spec)
    sz = szego(spec, logh)
    x = float(spec.xs[nu - 1])
    return LocalFrame(spec, nu, delta, x, float(spec.lams[nu - 1]), sz,
                      phase_phi(spec, nu, logh))


def _upper(z):
    return not math.copysign(1.0, z.imag) < 0


def conformal_f(frame, z):
    """f(z) = +-i log phi(z) + arccos(x_nu), sign following the half-plane of z."""
    z = complex(z)
    if z.imag == 0.0:
        if abs(z.real) >= 1.0:
            raise DomainError("f is not defined on the real axis outside (-1, 1)")
        # both boundary values agree on (-1, 1)
        return complex(math.acos(frame.x) - math.acos(z.real), 0.0)
    lp = cmath.log(complex(phi_map(z)))
    s = 1.0 if _upper(z) else -1.0
    return s * 1j * lp + math.acos(frame.x)


def _f_prime(frame, z):
    s = 1.0 if _upper(z) else -1.0
    return s * 1j / complex(sqrt_z2m1(z))


def gamma_contour(frame, t, tol=1e-14, max_steps=50):
    """Point z with f(z) = i t, found by Newton iteration from x + i t sqrt(1 - x^2)."""
    t = float(t)
    if t == 0.0:
        return complex(frame.x, 0.0)
    z = complex(frame.x, t * math.sqrt(1.0 - frame.x ** 2))
    target = 1j * t
    for _ in range(max_steps):
        step = (conformal_f(frame, z) - target) / _f_prime(frame, z)
        z -= step
        if abs(step) <= tol * max(1.0, abs(z)):
            return z
    raise ConvergenceError("Newton iteration for the contour did not converge")


def _neg(z):
    # -z keeps the sign of a zero imaginary part consistent for boundary values
    return -z


def W_xnu(frame, z):
    """W(z) on the four regions cut out by the real axis and Gamma."""
    z = complex(z)
    s = frame.spec
    val = cmath.exp(0.5 * s.alpha * cmath.log(_neg(z - 1.0))
                    + 0.5 * s.beta * cmath.log(z + 1.0))
    val *= cmath.sqrt(complex(s.h(np.array(z))))
    for k, (xk, lk) in enumerate(s.singularities, start=1):
        if k < frame.nu:
            val *= cmath.exp(lk * cmath.log(z - xk))
        elif k > frame.nu:
            val *= cmath.exp(lk * cmath.log(_neg(z - xk)))
    if conformal_f(frame, z).real < 0.0:
        val *= cmath.exp(frame.lam * cmath.log(z - frame.x))
    else:
        val *= cmath.exp(frame.lam * cmath.log(_neg(z - frame.x)))
    return val


def N_matrix(spec_or_szego, z):
    """Outer parametrix N(z) for z off [-1, 1] (signed zero imaginary parts select a side)."""
    sz = spec_or_szego if hasattr(spec_or_szego, "D_infinity") else szego(spec_or_szego)
    z = complex(z)
    a = cmath.exp(0.25 * (cmath.log(z - 1.0) - cmath.log(z + 1.0)))
    ai = 1.0 / a
    M = np.array([[(a + ai) / 2, (a - ai) / 2j], [-(a - ai) / 2j, (a + ai) / 2]])
    D = complex(sz._eval(np.array(z)))
    dinf = sz.D_infinity
    return sigma3_power(dinf) @ M @ sigma3_power(1.0 / D)


def _quadrant(frame, z):
    """1..4 for K^I (right, upper), K^II (left, upper), K^III (left, lower), K^IV (right, lower)."""
    right = conformal_f(frame, z).real >= 0.0
    if _upper(z):
        return 1 if right else 2
    return 4 if right else 3


def E_nu(frame, z):
    z = complex(z)
    if abs(z - frame.x) > frame.delta * (1 + 1e-12):
        raise DomainError("E_nu is evaluated inside the disk only")
    q = _quadrant(frame, z)
    N = N_matrix(frame.szego, z)
    Wm = sigma3_power(W_xnu(frame, z))
    half = 0.5 * frame.lam * math.pi
    if q == 1:
        return N @ Wm @ _exp_sigma3(half)
    if q == 2:
        return N @ Wm @ _exp_sigma3(-half)
    if q == 3:
        return N @ Wm @ OFFDIAG @ _exp_sigma3(-half)
    return N @ Wm @ OFFDIAG @ _exp_sigma3(half)


def E_nu_at_point(frame):
    """Closed form of E_nu at x_nu."""
    x = frame.x
    ph = frame.phi_plus
    sq = cmath.sqrt(ph)
    pref = cmath.exp(-0.25j * math.pi) / (math.sqrt(2.0) * (1.0 - x * x) ** 0.25)
    M = np.array([[sq, 1j / sq], [-1j / sq, sq]])
    return pref * sigma3_power(frame.szego.D_infinity) @ M @ _exp_sigma3(-0.5 * frame.Phi)


def _right_n(frame, n):
    return sigma3_power(frame.phi_plus ** n) @ _exp_sigma3(-math.pi / 4) @ _L_INV


def E_n_xnu(frame, n, z):
    return E_nu(frame, z) @ _right_n(frame, n)


def P_matrix(frame, n, z):
    """Local parametrix E_n Psi(n f) W^{-sigma3} phi^{-n sigma3}."""
    z = complex(z)
    zeta = n * conformal_f(frame, z)
    Psi = psi_lambda(frame.lam, zeta)
    W = W_xnu(frame, z)
    ph = complex(phi_map(z))
    return E_n_xnu(frame, n, z) @ Psi @ sigma3_power(1.0 / W) @ sigma3_power(ph ** (-n))


def boundary_points(frame, count=64):
    th = 2.0 * math.pi * (np.arange(count) + 0.5) / count
    return frame.x + frame.delta * np.exp(1j * th)


def matching_error(frame, n, count=64, with_det=False):
    """max over the disk boundary of |P N^-1 - I| (and of |det P - 1| if asked)."""
    err = 0.0
    derr = 0.0
    for z in boundary_points(frame, count):
        P = P_matrix(frame, n, z)
        N = N_matrix(frame.szego, z)
        err = max(err, norm_max(P @ inv2(N) - np.eye(2)))
        derr = max(derr, abs(det2(P) - 1.0))
    return (err, derr) if with_det else err


def delta1_residue(frame, n):
    """Residue at x_nu of the first correction term (built from E_nu(x_nu))."""
    lam = frame.lam
    E = E_nu_at_point(frame)
    ph = sigma3_power(frame.phi_plus ** n)
    M = np.array([[-2 * lam * lam, -2 * lam], [2 * lam, 2 * lam * lam]], dtype=complex)
    return 0.25j * math.sqrt(1 - frame.x ** 2) * E @ ph @ M @ inv2(ph) @ inv2(E)


def residue_check(frame, n, count=64):
    """Compare (1/2 pi i) \\oint n (P N^-1 - I) dz with the predicted residue.

    Returns (relative deviation, contour value, predicted residue).  The
    contour value equals the residue up to O(1/n).
    """
    pts = boundary_points(frame, count)
    dz = 1j * (pts - frame.x) * (2.0 * math.pi / count)
    acc = np.zeros((2, 2), dtype=complex)
    for z, d in zip(pts, dz):
        P = P_matrix(frame, n, z)
        N = N_matrix(frame.szego, z)
        acc += n * (P @ inv2(N) - np.eye(2)) * d
    acc /= 2j * math.pi
    pred = delta1_residue(frame, n)
    return norm_max(acc - pred) / norm_max(pred), acc, pred
