"""Generalized Jacobi weights and their analytic factor.

A weight is

    w(x) = (1 - x)**alpha * (1 + x)**beta * h(x) * prod_k |x - x_k|**(2*lam_k)

on (-1, 1), with h a strictly positive function stored as a Chebyshev series.
"""
import json
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as C

from . import _kernels
from .errors import DomainError, OrderError, PositivityError, RangeError

__all__ = [
    "ChebSeries", "WeightSpec", "validate", "eval_weight", "log_h_series",
    "spec_from_dict", "spec_to_dict", "load_spec", "reflect",
]

_TAIL_TOL = 1e-15


@dataclass(frozen=True)
class ChebSeries:
    """Finite Chebyshev-T expansion sum_k coeffs[k] T_k(x) on [-1, 1]."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in np.atleast_1d(np.asarray(self.coeffs, dtype=float)))
        if len(c) == 0:
            c = (0.0,)
        if not all(math.isfinite(v) for v in c):
            raise ValueError("Chebyshev coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def array(self):
        return np.array(self.coeffs)

    def numerical_degree(self, tol=_TAIL_TOL):
        """Index of the last coefficient above tol * max|c_k|."""
        c = np.abs(self.array)
        big = c.max()
        if big == 0.0:
            return 0
        idx = np.nonzero(c > tol * big)[0]
        return int(idx[-1])

    def __call__(self, x):
        x = np.asarray(x)
        if np.iscomplexobj(x):
            return _clenshaw_complex(self.array, x)
        scalar = x.ndim == 0
        xs = np.ascontiguousarray(np.atleast_1d(x), dtype=float).ravel()
        out = _kernels.clenshaw(self.array, xs).reshape(np.shape(x) or (1,))
        return float(out[0]) if scalar else out


def _clenshaw_complex(c, z):
    b1 = np.zeros_like(z, dtype=complex)
    b2 = np.zeros_like(b1)
    for k in range(len(c) - 1, 0, -1):
        b1, b2 = c[k] + 2.0 * z * b1 - b2, b1
    out = c[0] + z * b1 - b2
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class WeightSpec:
    """Parameters of a generalized Jacobi weight.

    ``singularities`` is a sequence of ``(x, lam)`` pairs; ``h`` is a
    ChebSeries or a plain positive number.  Use :func:`validate` to obtain a
    normalized instance (sorted, zero exponents removed, h as a ChebSeries).
    """

    alpha: float
    beta: float
    singularities: tuple = ()
    h: object = 1.0
    _validated: bool = field(default=False, repr=False, compare=False)

    @property
    def xs(self):
        return np.array([s[0] for s in self.singularities], dtype=float)

    @property
    def lams(self):
        return np.array([s[1] for s in self.singularities], dtype=float)

    @property
    def n_sing(self):
        return len(self.singularities)

    def is_symmetric(self):
        if self.alpha != self.beta:
            return False
        xs, lams = self.xs, self.lams
        if not (np.array_equal(xs, -xs[::-1]) and np.array_equal(lams, lams[::-1])):
            return False
        c = np.array(self.h.coeffs) if isinstance(self.h, ChebSeries) else np.array([1.0])
        return bool(np.all(c[1::2] == 0.0))


def _sample_points(m=64):
    return np.cos(np.pi * (np.arange(m) + 0.5) / m)


def validate(raw):
    """Check every invariant and return a normalized WeightSpec.

    Accepts a WeightSpec or a dict in the JSON schema.  Singularities are
    sorted, entries with lambda == 0 are dropped and a constant h becomes a
    one-term ChebSeries.  Idempotent.
    """
    if isinstance(raw, dict):
        raw = spec_from_dict(raw, check=False)
    if raw._validated:
        return raw
    alpha, beta = float(raw.alpha), float(raw.beta)
    if not (math.isfinite(alpha) and alpha > -1.0):
        raise RangeError(f"alpha must be > -1, got {alpha}")
    if not (math.isfinite(beta) and beta > -1.0):
        raise RangeError(f"beta must be > -1, got {beta}")

    sing = []
    for item in raw.singularities:
        x, lam = float(item[0]), float(item[1])
        if not (math.isfinite(lam) and 2.0 * lam > -1.0):
            raise RangeError(f"singularity exponent must satisfy 2*lambda > -1, got {lam}")
        if not (math.isfinite(x) and -1.0 < x < 1.0):
            raise OrderError(f"singular point {x} is not inside (-1, 1)")
        if lam != 0.0:
            sing.append((x, lam))
    sing.sort()
    for (x0, _), (x1, _) in zip(sing, sing[1:]):
        if not x1 > x0:
            raise OrderError(f"singular points collide at {x0}")

    h = raw.h
    if not isinstance(h, ChebSeries):
        h = ChebSeries((float(h),))
    if not np.all(h(_sample_points()) > 0.0):
        raise PositivityError("h must be strictly positive on [-1, 1]")

    return WeightSpec(alpha, beta, tuple(sing), h, _validated=True)


def _factor(spec):
    """Return (points, exponents) of all algebraic factors, endpoints included."""
    pts = np.concatenate(([-1.0], spec.xs, [1.0]))
    exps = np.concatenate(([spec.beta], 2.0 * spec.lams, [spec.alpha]))
    return pts, exps


def eval_weight(spec, x):
    """w(x) for x in the open interval; array input is accepted."""
    spec = validate(spec)
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) >= 1.0):
        raise DomainError("the weight is only defined on the open interval (-1, 1)")
    pts, exps = _factor(spec)
    with np.errstate(divide="ignore"):
        val = np.asarray(spec.h(xa), dtype=float)
        for p, e in zip(pts, exps):
            val = val * np.abs(xa - p) ** e
    return float(val) if val.ndim == 0 else val


def log_h_series(spec, degree=None):
    """Chebyshev interpolant of log h.

    With an explicit ``degree`` the interpolant uses degree+1 Chebyshev
    points.  Without it the degree starts at four times the numerical degree
    of h (capped at 512) and is doubled until the trailing coefficients have
    decayed to rounding level.  Trailing coefficients below 1e-15 * max|c|
    are cut off in both cases.
    """
    spec = validate(spec)
    h = spec.h
    if h.degree == 0:
        if not h.coeffs[0] > 0.0:
            raise PositivityError("h must be positive")
        return ChebSeries((math.log(h.coeffs[0]),))

    def logh(t):
        v = h(t)
        if np.any(v <= 0.0):
            raise PositivityError("h must be positive at every interpolation point")
        return np.log(v)

    if degree is not None:
        if degree < 0:
            raise ValueError("degree must be non-negative")
        c = C.chebinterpolate(logh, int(degree)) if degree > 0 else np.array([logh(np.array([0.0]))[0]])
        return _truncate(c)

    deg = min(max(4 * h.numerical_degree(), 8), 512)
    while True:
        c = C.chebinterpolate(logh, deg)
        tail = np.abs(c[-max(3, deg // 8):]).max()
        if tail <= 1e-15 * np.abs(c).max() or deg >= 512:
            return _truncate(c)
        deg = min(2 * deg, 512)


def _truncate(c):
    c = np.asarray(c, dtype=float)
    big = np.abs(c).max()
    if big == 0.0:
        return ChebSeries((0.0,))
    keep = np.nonzero(np.abs(c) >= _TAIL_TOL * big)[0]
    return ChebSeries(c[: keep[-1] + 1])


def reflect(spec):
    """The weight x -> w(-x): swap alpha and beta, mirror points, flip odd h terms."""
    spec = validate(spec)
    c = np.array(spec.h.coeffs)
    c[1::2] *= -1.0
    sing = tuple((-x, lam) for x, lam in reversed(spec.singularities))
    return validate(WeightSpec(spec.beta, spec.alpha, sing, ChebSeries(c)))


# -- JSON schema --------------------------------------------------------------

def _num(d, key, where):
    if key not in d:
        raise RangeError(f"missing field '{where}{key}'")
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise RangeError(f"field '{where}{key}' must be a number")
    return float(v)


def spec_from_dict(d, check=True):
    if not isinstance(d, dict):
        raise RangeError("weight spec must be a JSON object")
    alpha = _num(d, "alpha", "")
    beta = _num(d, "beta", "")
    sing_raw = d.get("singularities", [])
    if not isinstance(sing_raw, (list, tuple)):
        raise RangeError("field 'singularities' must be a list")
    sing = []
    for i, s in enumerate(sing_raw):
        if isinstance(s, (tuple, list)) and len(s) == 2:
            # python callers may pass (x, lambda) pairs
            s = {"x": s[0], "lambda": s[1]}
        if not isinstance(s, dict):
            raise RangeError(f"field 'singularities[{i}]' must be an object")
        sing.append((_num(s, "x", f"singularities[{i}]."), _num(s, "lambda", f"singularities[{i}].")))
    hd = d.get("h", {"type": "constant", "value": 1.0})
    if isinstance(hd, ChebSeries):
        hd = {"type": "chebyshev", "coeffs": list(hd.coeffs)}
    elif isinstance(hd, (int, float, np.floating)) and not isinstance(hd, bool):
        hd = {"type": "constant", "value": float(hd)}
    elif isinstance(hd, (list, tuple, np.ndarray)):
        hd = {"type": "chebyshev", "coeffs": [float(v) for v in hd]}
    if not isinstance(hd, dict) or "type" not in hd:
        raise RangeError("field 'h' must be an object with a 'type'")
    if hd["type"] == "constant":
        h = ChebSeries((_num(hd, "value", "h."),))
    elif hd["type"] == "chebyshev":
        co = hd.get("coeffs")
        if not isinstance(co, list) or not co or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in co):
            raise RangeError("field 'h.coeffs' must be a non-empty list of numbers")
        h = ChebSeries(tuple(float(v) for v in co))
    else:
        raise RangeError(f"field 'h.type' must be 'constant' or 'chebyshev', got {hd['type']!r}")
    spec = WeightSpec(alpha, beta, tuple(sing), h)
    return validate(spec) if check else spec


def spec_to_dict(spec):
    spec = validate(spec)
    c = spec.h.coeffs
    h = ({"type": "constant", "value": c[0]} if len(c) == 1
         else {"type": "chebyshev", "coeffs": list(c)})
    return {
        "alpha": spec.alpha,
        "beta": spec.beta,
        "singularities": [{"x": x, "lambda": lam} for x, lam in spec.singularities],
        "h": h,
    }


def load_spec(path):
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise RangeError(f"malformed JSON in {path}: {exc}") from None
    return spec_from_dict(d)
