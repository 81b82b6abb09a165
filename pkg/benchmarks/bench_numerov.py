"""Time the compiled and pure-Python Numerov kernels on the same inputs.

    python3 benchmarks/bench_numerov.py [--points 4001] [--repeat 5]

Reports per-call times for the raw kernels and the end-to-end cost of
``solve_levels(sinh2, 9)`` with each backend (the latter in a subprocess,
since the backend is fixed at import).
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from pdmosc import _numerov_py

try:
    from pdmosc import _numerov as _compiled
except ImportError:
    _compiled = None

SOLVE = ("import time; from pdmosc.schrodinger import solve_levels; from pdmosc.transform import PotentialSpec; "
         "t = time.perf_counter(); solve_levels(PotentialSpec.sinh2(), 9); print(time.perf_counter() - t)")


def weights(points: int, energy: float = 7.5) -> np.ndarray:
    y = np.linspace(-8.0, 8.0, points)
    h = y[1] - y[0]
    return np.ascontiguousarray(h * h / 6.0 * (energy - 0.5 * y * y))


def kernel_times(mod, w, repeat):
    out = np.empty_like(w)
    nodes = min(timeit.repeat(lambda: mod.numerov_nodes(w, 0.0, 1e-30), number=10, repeat=repeat)) / 10
    fill = min(timeit.repeat(lambda: mod.numerov_fill(w, 0.0, 1e-30, out), number=10, repeat=repeat)) / 10
    return nodes, fill


def solve_time(pure: bool) -> float:
    env = dict(os.environ)
    if pure:
        env["PDMOSC_PURE_PYTHON"] = "1"
    else:
        env.pop("PDMOSC_PURE_PYTHON", None)
    proc = subprocess.run([sys.executable, "-c", SOLVE], capture_output=True, text=True, env=env, check=True)
    return float(proc.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=4001)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    w = weights(args.points)

    rows = [("python", *kernel_times(_numerov_py, w, args.repeat), solve_time(True))]
    if _compiled is not None:
        rows.append(("cython", *kernel_times(_compiled, w, args.repeat), solve_time(False)))
    else:
        print("compiled kernel not built; showing the Python backend only")

    print(f"{'backend':8s} {'nodes [us]':>12s} {'fill [us]':>12s} {'sinh2 k<=9 [ms]':>16s}")
    for name, n, f, s in rows:
        print(f"{name:8s} {n * 1e6:12.1f} {f * 1e6:12.1f} {s * 1e3:16.1f}")
    if len(rows) == 2:
        py, cy = rows
        print(f"speed-up: nodes x{py[1] / cy[1]:.0f}, fill x{py[2] / cy[2]:.0f}, solve x{py[3] / cy[3]:.1f}")


if __name__ == "__main__":
    main()
