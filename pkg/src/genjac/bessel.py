"""Bessel, modified Bessel and Hankel functions of real order and complex argument.

Small |z| (<= 12):
  * J and I from their power series;
  * K from the integral  K_v(w) = 1/2 int exp(-w cosh t + v t) dt  taken along
    t = u - i*arg(w)*tanh(u), which passes through the saddle at t = 0 close to
    the steepest-descent direction, then summed by the trapezoidal rule
    (exponentially convergent for this analytic, doubly-exponentially
    decaying integrand);
  * H1, H2 from K on the rotated argument.
Large |z| (> 12): the standard Hankel-type expansions, truncated at the
smallest term.

Building K and the Hankel functions from a contour integral instead of from
J_{+-v}, I_{+-v} avoids the cancellation of the reflection formulas (a loss of
roughly exp(2|Re z|) digits) and is regular at integer order.
"""
import cmath
import math

import numpy as np

from .errors import AccuracyError, DomainError

__all__ = ["bessel", "besselj", "besseli", "besselk", "hankel1", "hankel2",
           "bessely", "asymptotic_coeffs"]

SERIES_RADIUS = 12.0
TAIL_TOL = 1e-9

_STEP = 0.04
_grids = {}


def _grid(w_abs):
    # the integrand must be negligible at the ends: |w| e^U / 2 >~ 40
    half = max(13, math.ceil(math.log(80.0 / w_abs)) + 2)
    g = _grids.get(half)
    if g is None:
        u = np.arange(-half, half + 0.5 * _STEP, _STEP)
        th = np.tanh(u)
        g = _grids[half] = (u, th, 1.0 - th ** 2)
    return g


def _rgamma(x):
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    if x > 171.0:
        return math.exp(-math.lgamma(x))
    return 1.0 / math.gamma(x)


def _series(nu, z, sign):
    """sum_k (sign z^2/4)^k / (k! Gamma(k+nu+1)), times (z/2)^nu."""
    q = sign * z * z / 4.0
    # start from the first non-vanishing term when nu is a negative integer
    k0 = 0
    if nu < 0 and nu == math.floor(nu):
        k0 = int(-nu)
    term = q ** k0 / math.factorial(k0) * _rgamma(k0 + nu + 1.0)
    total = term
    k = k0
    while True:
        k += 1
        term = term * q / (k * (k + nu))
        total += term
        if abs(term) <= 1e-17 * abs(total) and k > abs(q) ** 0.5:
            break
        if k > 500:
            break
    return cmath.exp(nu * cmath.log(z / 2.0)) * total


def asymptotic_coeffs(nu, kmax):
    """a_k(nu) = (4nu^2-1)(4nu^2-9)...(4nu^2-(2k-1)^2) / (k! 8^k), k = 0..kmax."""
    mu = 4.0 * nu * nu
    out = [1.0]
    for k in range(1, kmax + 1):
        out.append(out[-1] * (mu - (2 * k - 1) ** 2) / (k * 8.0))
    return out


def _asym_sum(nu, z, sign):
    """sum_k a_k(nu) (sign/z)^k, stopped at the smallest term.

    Raises AccuracyError if the smallest term exceeds TAIL_TOL relative.
    """
    mu = 4.0 * nu * nu
    total = 1.0 + 0j
    term = 1.0 + 0j
    prev = 1.0
    x = sign / z
    for k in range(1, 400):
        nxt = term * (mu - (2 * k - 1) ** 2) / (k * 8.0) * x
        if abs(nxt) >= prev and k > 1:
            break
        if nxt == 0:
            return total
        term = nxt
        total += term
        prev = abs(term)
        if prev <= 1e-17 * abs(total):
            return total
    if prev > TAIL_TOL * abs(total):
        raise AccuracyError(f"asymptotic tail {prev:.2e} too large at |z|={abs(z):.3g}")
    return total


def _check(z):
    z = complex(z)
    if z == 0:
        raise DomainError("Bessel functions are evaluated at z != 0")
    if z.imag == 0.0 and z.real < 0.0:
        raise DomainError("z on the branch cut (-inf, 0]")
    return z


# -- K ----------------------------------------------------------------------------

def _k_contour(nu, w):
    """K_nu(w) by trapezoidal quadrature on the tilted contour, |arg w| < pi."""
    phi = cmath.phase(w)
    u, th, sech2 = _grid(abs(w))
    t = u - 1j * phi * th
    dt = 1.0 - 1j * phi * sech2
    expo = -w * np.cosh(t) + nu * t
    # shift by the saddle value to keep the exponent in range
    shift = -w
    f = np.exp(expo - shift) * dt
    return 0.5 * _STEP * f.sum() * cmath.exp(shift)


def _k_asym(nu, w):
    return cmath.sqrt(math.pi / (2.0 * w)) * cmath.exp(-w) * _asym_sum(nu, w, 1.0)


def besselk(nu, z):
    z = complex(z)
    if z == 0:
        raise DomainError("K is evaluated at z != 0")
    if abs(cmath.phase(z)) >= math.pi - 1e-12:
        raise DomainError("K: z on the branch cut")
    nu = abs(float(nu))
    if abs(z) > SERIES_RADIUS:
        return _k_asym(nu, z)
    return _k_contour(nu, z)


# -- Hankel ---------------------------------------------------------------------

def _h_asym(nu, z, kind):
    s = 1.0 if kind == 1 else -1.0
    phase = s * 1j * (z - nu * math.pi / 2.0 - math.pi / 4.0)
    return cmath.sqrt(2.0 / (math.pi * z)) * cmath.exp(phase) * _asym_sum(nu, z, s * 1j)


def hankel1(nu, z):
    z = _check(z)
    nu = float(nu)
    ph = cmath.phase(z)
    if abs(z) > SERIES_RADIUS:
        if ph >= -math.pi / 2.0:
            return _h_asym(nu, z, 1)
        return 2.0 * besselj(nu, z) - _h_asym(nu, z, 2)
    if ph > -math.pi / 2.0:
        # H1_nu(z) = (2/(pi i)) e^{-i nu pi/2} K_nu(z e^{-i pi/2})
        return 2.0 / (math.pi * 1j) * cmath.exp(-0.5j * nu * math.pi) * besselk(nu, -1j * z)
    return 2.0 * besselj(nu, z) - hankel2(nu, z)


def hankel2(nu, z):
    z = _check(z)
    nu = float(nu)
    ph = cmath.phase(z)
    if abs(z) > SERIES_RADIUS:
        if ph <= math.pi / 2.0:
            return _h_asym(nu, z, 2)
        return 2.0 * besselj(nu, z) - _h_asym(nu, z, 1)
    if ph < math.pi / 2.0:
        return -2.0 / (math.pi * 1j) * cmath.exp(0.5j * nu * math.pi) * besselk(nu, 1j * z)
    return 2.0 * besselj(nu, z) - hankel1(nu, z)


# -- J, Y, I -----------------------------------------------------------------------

def besselj(nu, z):
    z = _check(z)
    nu = float(nu)
    if abs(z) > SERIES_RADIUS:
        ph = cmath.phase(z)
        if abs(ph) <= math.pi / 2.0:
            return 0.5 * (_h_asym(nu, z, 1) + _h_asym(nu, z, 2))
        # J_nu(z) = e^{+-i nu pi} J_nu(-z), sign following arg z
        rot = cmath.exp(math.copysign(1.0, ph) * 1j * nu * math.pi)
        return rot * 0.5 * (_h_asym(nu, -z, 1) + _h_asym(nu, -z, 2))
    return _series(nu, z, -1.0)


def bessely(nu, z):
    return (hankel1(nu, z) - hankel2(nu, z)) / 2j


def besseli(nu, z):
    z = _check(z)
    nu = float(nu)
    if abs(z) > SERIES_RADIUS:
        ph = cmath.phase(z)
        pref = 1.0 / cmath.sqrt(2.0 * math.pi * z)
        main = cmath.exp(z) * _asym_sum(nu, z, -1.0)
        if ph > 0.0:
            sub = 1j * cmath.exp(1j * nu * math.pi)
        elif ph < 0.0:
            sub = -1j * cmath.exp(-1j * nu * math.pi)
        else:
            sub = -math.sin(nu * math.pi)
        # the recessive part matters once |arg z| is away from 0
        if abs(ph) > 1e-3 or abs(z) < 20:
            main = main + sub * cmath.exp(-z) * _asym_sum(nu, z, 1.0)
        return pref * main
    return _series(nu, z, 1.0)


_KINDS = {"J": besselj, "I": besseli, "K": besselk, "H1": hankel1, "H2": hankel2, "Y": bessely}


def bessel(kind, order, z):
    """Dispatch by name: kind in {'J', 'I', 'K', 'H1', 'H2', 'Y'}."""
    try:
        fn = _KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown Bessel kind {kind!r}") from None
    return fn(order, z)
