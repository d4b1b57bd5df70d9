"""Command line front end: ``genjac recur|compare|rh-check``.

Exit codes: 0 success (failed verification checks are reported, not fatal),
2 invalid input, 3 numerical degeneracy, 4 special-function accuracy failure.
"""
import argparse
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import rh_verifier as rh
from .asymptotics import prediction
from .errors import AccuracyError, DomainError, OrderError, PositivityError, PrecisionError, RangeError
from .recurrence_oracle import csv_text, stieltjes
from .weight_model import load_spec, validate, WeightSpec, ChebSeries

N_LIMIT = 500
EXIT_INPUT, EXIT_PRECISION, EXIT_ACCURACY = 2, 3, 4


class InputError(Exception):
    pass


def _threads():
    raw = os.environ.get("GENJAC_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


def _map(fn, items):
    """Order-preserving map, threaded up to GENJAC_THREADS workers."""
    items = list(items)
    workers = min(_threads(), len(items))
    if workers <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _g(v):
    return f"{v:.17g}"


def _jnum(v):
    v = float(v)
    return v if math.isfinite(v) else str(v)


def _dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _write(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _check_range(nmin, nmax):
    if not (1 <= nmin <= nmax <= N_LIMIT):
        raise InputError(f"need 1 <= nmin <= nmax <= {N_LIMIT}, got nmin={nmin}, nmax={nmax}")


def _spec(path):
    if path is None:
        raise InputError("--spec is required")
    try:
        return load_spec(path)
    except OSError as exc:
        raise InputError(f"cannot read spec: {exc}") from None


def _table(spec, nmax, nodes):
    if nodes is not None and nodes < 1:
        raise InputError("--nodes must be positive")
    # b_n is tabulated for n < N, so one extra step
    return stieltjes(spec, nmax + 1, nodes)


# -- recur -----------------------------------------------------------------------

def cmd_recur(args):
    _check_range(args.nmin, args.nmax)
    spec = _spec(args.spec)
    table = _table(spec, args.nmax, args.nodes)
    if args.format == "json":
        rows = [{"n": n, "a_n": _jnum(table.a_n(n)), "b_n": _jnum(table.b_n(n))}
                for n in range(args.nmin, args.nmax + 1)]
        text = _dump_json(rows)
    else:
        text = csv_text(table, args.nmin, args.nmax)
    _write(text, args.out)
    return 0


# -- compare ---------------------------------------------------------------------

def dyadic_windows(nmin, nmax, start=None):
    """[W, 2W], [2W, 4W], ... inside [nmin, nmax]."""
    W = max(nmin, 1) if start is None else start
    out = []
    while 2 * W <= nmax:
        out.append((W, 2 * W))
        W *= 2
    return out


def window_test(n, r, windows, slack=1e-8, growth=1.5):
    """Max of |r| per window and whether each window stays below growth * previous + slack."""
    n = np.asarray(n)
    r = np.abs(np.asarray(r))
    maxima = [float(r[(n >= lo) & (n <= hi)].max()) for lo, hi in windows]
    ok = all(b <= growth * a + slack for a, b in zip(maxima, maxima[1:]))
    return maxima, ok


def compare_rows(spec, nmin, nmax, nodes=None):
    table = _table(spec, nmax, nodes)
    pred = prediction(spec)
    n = np.arange(nmin, nmax + 1)
    a_or = table.a[n - 1]
    b_or = table.b[n]
    a_pr = np.asarray(pred.a(n), dtype=float)
    b_pr = np.asarray(pred.b(n), dtype=float)
    ra = n * n * (a_or - a_pr)
    rb = n * n * (b_or - b_pr)
    return n, a_or, b_or, a_pr, b_pr, ra, rb


def compare_summary(n, ra, rb, b_or, windows, slack):
    amax, aok = window_test(n, ra, windows, slack)
    bmax, bok = window_test(n, rb, windows, slack)
    n2 = np.asarray(n, dtype=float) ** 2
    return {
        "max_abs_resid_a": _jnum(np.abs(ra / n2).max()),
        "max_abs_resid_b": _jnum(np.abs(rb / n2).max()),
        "windows": [list(w) for w in windows],
        "n2_resid_a_max": [_jnum(v) for v in amax],
        "n2_resid_b_max": [_jnum(v) for v in bmax],
        "max_abs_b_oracle": _jnum(np.abs(b_or).max()),
        "bounded_a": aok,
        "bounded_b": bok,
        "pass": bool(aok and bok and len(windows) >= 2),
    }


def cmd_compare(args):
    _check_range(args.nmin, args.nmax)
    if not args.slack > 0:
        raise InputError("--slack must be positive")
    spec = _spec(args.spec)
    n, a_or, b_or, a_pr, b_pr, ra, rb = compare_rows(spec, args.nmin, args.nmax, args.nodes)
    windows = dyadic_windows(args.nmin, args.nmax, args.window)
    summary = compare_summary(n, ra, rb, b_or, windows, args.slack)
    cols = ("n", "a_oracle", "b_oracle", "a_pred", "b_pred", "n2_resid_a", "n2_resid_b")
    if args.format == "json":
        rows = [dict(zip(cols, (int(k),) + tuple(_jnum(v) for v in vals)))
                for k, *vals in zip(n, a_or, b_or, a_pr, b_pr, ra, rb)]
        _write(_dump_json({"rows": rows, "summary": summary}), args.out)
        return 0
    buf = io.StringIO()
    buf.write(",".join(cols) + "\n")
    for k, *vals in zip(n, a_or, b_or, a_pr, b_pr, ra, rb):
        buf.write(f"{k}," + ",".join(_g(v) for v in vals) + "\n")
    _write(buf.getvalue(), args.out)
    if args.out is None or args.out == "-":
        sys.stderr.write(_dump_json(summary))
    else:
        _write(_dump_json(summary), os.path.splitext(args.out)[0] + ".summary.json")
    return 0


# -- rh-check --------------------------------------------------------------------

RADII = (0.5, 2.0, 10.0, 40.0)
TOL_JUMP = 1e-8
TOL_DET = 1e-9
RESIDUE_TOL = 0.05


def _check(name, residual, samples, tol, passed=None, **extra):
    residual = float(residual)
    ok = bool(residual <= tol) if passed is None else bool(passed)
    entry = {"name": name, "max_residual": _jnum(residual), "samples": int(samples),
             "tolerance": tol, "pass": ok}
    entry.update(extra)
    return entry


def psi_checks(lam):
    out = []
    jumps = rh.verify_psi_jumps(lam, RADII)
    out.append(_check(f"psi_jumps[lambda={lam}]", max(jumps.values()), 8 * len(RADII), TOL_JUMP,
                      per_ray={str(k): _jnum(v) for k, v in jumps.items()}))
    dets = []
    for k in range(1, 9):
        for r in RADII:
            zeta = r * np.exp(1j * (k - 0.5) * np.pi / 4)
            dets.append(abs(rh.det2(rh.psi_lambda(lam, zeta)) - 1.0))
    out.append(_check(f"psi_det[lambda={lam}]", max(dets), len(dets), TOL_DET))
    # one point per quadrant, away from the rays
    angles = [np.pi / 8, 5 * np.pi / 8, -5 * np.pi / 8, -np.pi / 8]
    for k in range(3):
        expect = 2.0 ** -(k + 1)
        worst = 0.0
        ratios = []
        for th in angles:
            e20 = rh.psi_asymptotic_error(lam, 20 * np.exp(1j * th), 2)[k]
            e40 = rh.psi_asymptotic_error(lam, 40 * np.exp(1j * th), 2)[k]
            ratio = e40 / e20 if e20 > 0 else 0.0
            ratios.append(_jnum(ratio))
            worst = max(worst, abs(ratio - expect))
        out.append(_check(f"psi_asymptotic_order_k{k}[lambda={lam}]", worst, len(angles),
                          0.2 * expect, ratios=ratios))
    return out


def frame_checks(spec, nu, ns, delta):
    frame = rh.local_frame(spec, nu, delta)
    tag = f"nu={nu}"
    out = []
    res = _map(lambda n: rh.matching_error(frame, n, with_det=True), ns)
    errs = [e for e, _ in res]
    count = len(rh.boundary_points(frame))
    out.append(_check(f"parametrix_det[{tag}]", max(d for _, d in res), count * len(ns), TOL_DET))
    # P N^-1 - I = O(1/n): err(n2)/err(n1) should track n1/n2
    if len(ns) >= 2:
        dev = 0.0
        ratios = []
        for (n1, e1), (n2, e2) in zip(zip(ns, errs), zip(ns[1:], errs[1:])):
            expect = n1 / n2
            ratio = e2 / e1 if e1 > 0 else math.inf
            ratios.append(_jnum(ratio))
            dev = max(dev, abs(ratio / expect - 1.0))
        out.append(_check(f"matching_decay[{tag}]", dev, len(ns), 0.3,
                          errors=[_jnum(e) for e in errs], ratios=ratios, n=list(ns)))
    rel = _map(lambda n: rh.residue_check(frame, n)[0], ns)
    out.append(_check(f"residue_vs_prediction[{tag}]", max(rel), len(ns), RESIDUE_TOL,
                      per_n=[_jnum(v) for v in rel]))
    return out, frame.delta


def _parse_ns(values):
    ns = []
    for v in values:
        for part in str(v).replace(",", " ").split():
            try:
                ns.append(int(part))
            except ValueError:
                raise InputError(f"--n expects integers, got {part!r}") from None
    if not ns or min(ns) < 1:
        raise InputError("--n needs positive integers")
    return sorted(set(ns))


def default_spec(lam):
    return validate(WeightSpec(0.0, 0.0, ((0.0, float(lam)),), ChebSeries((1.0,))))


def cmd_rh_check(args):
    ns = _parse_ns(args.n)
    if args.spec is not None:
        spec = _spec(args.spec)
        if spec.n_sing == 0:
            raise InputError("spec has no interior singularity to check")
    else:
        lam = 0.25 if args.lam is None else args.lam
        if not lam > -0.5:
            raise InputError("--lambda must exceed -1/2")
        spec = default_spec(lam)
    lams = sorted({float(l) for l in spec.lams} | ({args.lam} if args.lam is not None else set()))
    for lam in lams:
        if not lam > -0.5:
            raise InputError("lambda must exceed -1/2")
    if args.delta is not None and not args.delta > 0:
        raise InputError("--delta must be positive")
    checks = []
    for lam in lams:
        checks.extend(psi_checks(lam))
    deltas = {}
    for nu in range(1, spec.n_sing + 1):
        c, d = frame_checks(spec, nu, ns, args.delta)
        checks.extend(c)
        deltas[str(nu)] = d
    failures = [c["name"] for c in checks if not c["pass"]]
    report = {
        "n": ns,
        "delta": deltas,
        "checks": checks,
        "failures": failures,
        "all_pass": not failures,
    }
    _write(_dump_json(report), args.out)
    return 0


# -- entry point -----------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="genjac", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, need_range=True):
        sp.add_argument("--spec", help="weight spec JSON file")
        if need_range:
            sp.add_argument("--nmin", type=int, default=1)
            sp.add_argument("--nmax", type=int, required=True)
        sp.add_argument("--nodes", type=int, default=None, help="Gauss-Jacobi nodes per subinterval")
        sp.add_argument("--out", default=None, help="output path (stdout if omitted)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    r = sub.add_parser("recur", help="tabulate a_n, b_n")
    common(r)
    r.set_defaults(fn=cmd_recur)

    c = sub.add_parser("compare", help="oracle vs first-order prediction")
    common(c)
    c.add_argument("--window", type=int, default=None, help="first dyadic window start (default nmin)")
    c.add_argument("--slack", type=float, default=1e-8, help="absolute slack of the window test")
    c.set_defaults(fn=cmd_compare)

    h = sub.add_parser("rh-check", help="verify the local parametrix")
    common(h, need_range=False)
    h.add_argument("--lambda", dest="lam", type=float, default=None)
    h.add_argument("--n", nargs="+", default=["50", "100"])
    h.add_argument("--delta", type=float, default=None)
    h.set_defaults(fn=cmd_rh_check, format="json")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (InputError, RangeError, OrderError, PositivityError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PrecisionError as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except AccuracyError as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY


if __name__ == "__main__":
    sys.exit(main())
