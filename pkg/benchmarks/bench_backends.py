"""Compare the accelerated and pure-numpy boundary accumulation backends.

Times the quaternion degree-1 reproduction workload (4-sphere product rule)
end to end for each backend and node count, checks that both backends agree,
and prints one row per configuration.

Usage:
    python3 benchmarks/bench_backends.py [--nodes 16 32 64] [--repeats 3]
"""
import argparse
import os
import time

import numpy as np

from hypercauchy._accel import HAS_NUMBA
from hypercauchy.families import fueter_conditions
from hypercauchy.kernel import CauchyKernel
from hypercauchy.solutions import named_solution
from hypercauchy.verify import BallDomain, QuadratureSpec, boundary_reproduce


def run_once(kernel, f, x, domain, nodes):
    spec = QuadratureSpec(scheme="product_gauss", nodes=nodes)
    t0 = time.perf_counter()
    rep = boundary_reproduce(f, x, domain, kernel, spec, check_solution=False)
    return time.perf_counter() - t0, rep


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nodes", type=int, nargs="+", default=[16, 32, 64],
                        help="per-axis node counts to benchmark")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timed repetitions per configuration (best wins)")
    args = parser.parse_args()

    C = fueter_conditions()
    kernel = CauchyKernel.from_conditions(C)
    f = named_solution("zeta1", C.table, C.n)
    x = np.array([0.1, 0.2, 0.0, 0.0])
    domain = BallDomain(np.zeros(4), 1.0)

    backends = ["numpy"] + (["numba"] if HAS_NUMBA else [])
    if not HAS_NUMBA:
        print("numba not importable; timing the numpy path only")

    # warm up once per backend so JIT compilation stays out of the timings
    for name in backends:
        os.environ["HYPERCAUCHY_BACKEND"] = name
        run_once(kernel, f, x, domain, min(args.nodes))

    print(f"{'backend':>8} {'nodes/axis':>10} {'total':>10} "
          f"{'best (s)':>10} {'rel_error':>12}")
    baseline = {}
    for nodes in args.nodes:
        for name in backends:
            os.environ["HYPERCAUCHY_BACKEND"] = name
            best, rep = min(
                (run_once(kernel, f, x, domain, nodes)
                 for _ in range(args.repeats)),
                key=lambda pair: pair[0],
            )
            print(f"{name:>8} {nodes:>10} {rep.nodes:>10} "
                  f"{best:>10.4f} {rep.rel_error:>12.3e}")
            value = rep.computed.coeffs
            if nodes in baseline:
                gap = float(np.max(np.abs(value - baseline[nodes])))
                if gap > 1e-12:
                    raise SystemExit(
                        f"backends disagree at {nodes} nodes: {gap:.3e}")
            else:
                baseline[nodes] = value
    os.environ.pop("HYPERCAUCHY_BACKEND", None)


if __name__ == "__main__":
    main()
