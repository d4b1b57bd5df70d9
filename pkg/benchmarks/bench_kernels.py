"""Compare the numba kernels with their pure numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The end-to-end column runs a full ``stieltjes`` call in a fresh interpreter
with GENJAC_BACKEND set, so it includes import and (cached) compile cost.
"""
import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from genjac import _kernels
from genjac.quadrature import composite_rule, jacobi_recurrence
from genjac.weight_model import validate


def best(fn, repeat):
    fn()  # warm-up (jit compile)
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def cases():
    rng = np.random.default_rng(0)
    c = rng.normal(size=64)
    x = rng.uniform(-1, 1, 20000)
    c_small = rng.normal(size=21)
    x_small = rng.uniform(-1, 1, 300)
    d, e = jacobi_recurrence(0.3, -0.2, 200)
    spec = validate(dict(alpha=0.3, beta=-0.2, singularities=[(0.5, 0.3)],
                         h=np.polynomial.chebyshev.chebinterpolate(np.exp, 20)))
    xs, ws = composite_rule(spec, 400)
    return {
        # typical size inside the library (one weight evaluation on a composite rule)
        "clenshaw (deg 20, 300 pts)": ("clenshaw", (c_small, x_small)),
        # large arrays: vectorized numpy catches up
        "clenshaw (deg 63, 20k pts)": ("clenshaw", (c, x)),
        "tridiag_ql (m=200)": ("tridiag_ql", (d, e, 50)),
        "stieltjes_sweep (N=300, 800 nodes)": ("stieltjes_sweep", (xs, ws, 300)),
    }


def end_to_end(backend):
    code = ("import time; t=time.perf_counter(); from genjac import stieltjes;"
            "stieltjes(dict(alpha=0.3, beta=-0.2, singularities=[(0.5, 0.3)]), 400);"
            "print(time.perf_counter()-t)")
    env = dict(os.environ, GENJAC_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels.BACKEND != "numba":
        print("numba backend not active; only numpy timings are meaningful")
    print(f"{'kernel':38s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s}")
    for label, (name, argv) in cases().items():
        fast = getattr(_kernels, name)
        slow = _kernels.numpy_versions[name]
        t1 = best(lambda: fast(*[a.copy() if isinstance(a, np.ndarray) else a for a in argv]), args.repeat)
        t2 = best(lambda: slow(*[a.copy() if isinstance(a, np.ndarray) else a for a in argv]), args.repeat)
        print(f"{label:38s} {1e3 * t1:11.4f} {1e3 * t2:11.4f} {t2 / t1:8.1f}")
    e1, e2 = end_to_end("numba"), end_to_end("numpy")
    print(f"{'stieltjes N=400, fresh process':38s} {1e3 * e1:11.1f} {1e3 * e2:11.1f} {e2 / e1:8.1f}")


if __name__ == "__main__":
    main()
