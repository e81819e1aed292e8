"""Compare the compiled and pure-Python planar ray kernels.

Usage: python benchmarks/bench_raykernel.py [--steps N] [--repeat R]
"""

import argparse
import time

import numpy as np

from qgtbundle import kernels
from qgtbundle.dirac import hyperbolic_model
from qgtbundle.rays import initial_state, integrate_ray


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=10000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    model = hyperbolic_model(1.0, "half_plane", charge=1.0, e_field=(0.1, 0.05), b_field=0.5)
    s = initial_state(model, [0.0, 1.0, 0.0, 0.0], [0.1, 0.05, 0.0])
    p0 = s.k + model.charge * model.A(s.x)
    lo = [d[0] for d in model.chart.domain]
    hi = [d[1] for d in model.chart.domain]
    dt = 1e-3
    call = (s.x, p0, 1, 1.0, 1.0, 0.1, 0.05, 0.5, dt, args.steps, lo, hi)

    rows = [("python kernel", _time(lambda: kernels.rk4_planar_python(*call), args.repeat))]
    if kernels.rk4_planar_compiled is not None:
        rows.append(("compiled kernel", _time(lambda: kernels.rk4_planar_compiled(*call), args.repeat)))
        xs_c, ps_c, _, _ = kernels.rk4_planar_compiled(*call)
        xs_p, ps_p, _, _ = kernels.rk4_planar_python(*call)
        diff = max(np.max(np.abs(xs_c - xs_p)), np.max(np.abs(ps_c - ps_p)))
    else:
        diff = float("nan")
    short = max(args.steps // 10, 1)
    t_gen = _time(lambda: integrate_ray(model, s, short * dt, dt, backend="generic"), 1) * args.steps / short
    rows.append(("generic numpy path (extrapolated)", t_gen))

    print(f"RK4 ray, {args.steps} steps, hyperbolic half-plane with EM field")
    base = rows[0][1]
    for name, t in rows:
        print(f"  {name:36s} {t * 1e3:10.2f} ms   x{base / t:8.1f} vs python kernel")
    print(f"  max |compiled - python| = {diff:.3e}")


if __name__ == "__main__":
    main()
