"""Compare the compiled kernels with the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py``.  The first table times each
kernel on the same inputs; the second times the full Steiner-polynomial
pipeline in a subprocess per backend, since the backend is chosen at import.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from steinerpoly import _kernels_py

try:
    from steinerpoly import _kernels
except ImportError:
    _kernels = None

PIPELINE = """
import time
from steinerpoly import Ellipsoid, build_rule, steiner_polynomial, kernels
body = Ellipsoid({axes})
rule = build_rule(body.dimension, {level})
steiner_polynomial(body, rule)
t = time.perf_counter()
for _ in range({repeat}):
    steiner_polynomial(body, rule)
print(kernels.BACKEND, (time.perf_counter() - t) / {repeat})
"""


def _inputs(n, count, rng):
    dirs = rng.normal(size=(count, n))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    A = rng.normal(size=(count, n, n))
    H = A + A.transpose(0, 2, 1)
    P = np.eye(n) - dirs[:, :, None] * dirs[:, None, :]
    H = np.ascontiguousarray(P @ H @ P)
    M = np.ascontiguousarray(_kernels_py.restrict_hessians(H, dirs))
    vals = np.ascontiguousarray(rng.uniform(0.5, 2.0, size=(count, n - 1)))
    x = rng.normal(size=count * n)
    return {"restrict_hessians": (H, dirs), "sym_eigvals": (M,),
            "elementary_symmetric": (vals,), "pairwise_sum": (x,)}


def bench_kernels(n, count, number):
    rng = np.random.default_rng(0)
    args = _inputs(n, count, rng)
    print(f"kernels, n={n}, {count} directions, best of 3 x {number}")
    print(f"{'kernel':24s} {'numpy [ms]':>12s} {'compiled [ms]':>14s} {'speedup':>8s}")
    for name, a in args.items():
        py = min(timeit.repeat(lambda: getattr(_kernels_py, name)(*a), number=number, repeat=3))
        line = f"{name:24s} {1e3 * py / number:12.3f}"
        if _kernels is not None:
            cy = min(timeit.repeat(lambda: getattr(_kernels, name)(*a), number=number, repeat=3))
            line += f" {1e3 * cy / number:14.3f} {py / cy:8.1f}"
        print(line)


def bench_pipeline(axes, level, repeat):
    print(f"\nsteiner_polynomial on Ellipsoid{axes}, level {level}")
    for pure in (False, True):
        env = dict(os.environ)
        env.pop("STEINERPOLY_PURE_PYTHON", None)
        if pure:
            env["STEINERPOLY_PURE_PYTHON"] = "1"
        code = PIPELINE.format(axes=tuple(axes), level=level, repeat=repeat)
        out = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                             capture_output=True, text=True).stdout.split()
        print(f"  {out[0]:9s} {1e3 * float(out[1]):10.2f} ms")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dimension", type=int, default=4)
    parser.add_argument("--count", type=int, default=20000)
    parser.add_argument("--number", type=int, default=5)
    args = parser.parse_args()
    bench_kernels(args.dimension, args.count, args.number)
    bench_pipeline((2.0, 1.5, 1.0, 1.2), 16, 3)
    bench_pipeline((2.0, 1.5, 1.0, 1.2, 1.7), 16, 2)


if __name__ == "__main__":
    main()
