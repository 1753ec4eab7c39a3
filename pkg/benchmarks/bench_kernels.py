"""Timing harness for the hot leaf-geometry kernels.

Compares the plain-numpy reference implementations against the jitted
wrappers on the two workload shapes that actually occur in the package:

* many small batches -- adaptive quadrature evaluates an integrand on
  ~order^2 nodes per panel, thousands of panels per classification run;
* one large batch -- parameter sweeps evaluate the root solver and
  g'(K) over a full (c1, c2) grid at once.

Run as a script::

    python3 benchmarks/bench_kernels.py
    CARTANKIT_DISABLE_NUMBA=1 python3 benchmarks/bench_kernels.py  # both columns plain

The second form is the honest baseline check: with numba disabled the two
columns must agree to measurement noise, since the registries then hold
the same functions.
"""

import argparse
import time

import numpy as np

from cartankit._backend import HAVE_NUMBA
from cartankit._kernels import JITTED_IMPLS, PYTHON_IMPLS

C1, C2 = 0.75, 0.11
LO, HI = -1.473, 3.132          # simple-root interval for (C1, C2)
K0 = 2.0 * np.sqrt(C1)


def workloads(rng, small, large):
    """Yield (kernel name, args for one call, batch repeat count)."""
    s_small = rng.uniform(0.05, 0.95, small)
    s_large = rng.uniform(0.05, 0.95, large)
    k_large = rng.uniform(LO + 0.1, HI - 0.1, large)
    c1_grid = rng.uniform(0.3, 2.0, large)
    c2_grid = rng.uniform(-0.2, 0.2, large)
    yield "ek_gprime", (k_large, C1, C2), 1
    yield "sphere_integrand", (s_small, C1, C2, LO, HI), large // small
    yield "cap_integrand", (s_small, C1, C2, K0, HI), large // small
    yield "cubic_roots_batch", (c1_grid, c2_grid), 1


def best_of(func, args, batch, repeats):
    """Best wall time (seconds) over ``repeats`` runs of ``batch`` calls."""
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(batch):
            func(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--small", type=int, default=121,
                        help="nodes per quadrature panel (default 121 = order 11)")
    parser.add_argument("--large", type=int, default=250_000,
                        help="grid size for the sweep-shaped workloads")
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    jobs = list(workloads(rng, args.small, args.large))

    if HAVE_NUMBA:
        print("numba backend: active (warming up the jit cache)")
        for name, call_args, _ in jobs:
            JITTED_IMPLS[name](*call_args)
    else:
        print("numba backend: disabled or unavailable -- both columns run "
              "the same plain-numpy code")

    header = f"{'kernel':<20s} {'batch':>6s} {'numpy ms':>10s} {'jitted ms':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for name, call_args, batch in jobs:
        ref = PYTHON_IMPLS[name]
        jit = JITTED_IMPLS[name]
        same = np.allclose(np.asarray(ref(*call_args), float),
                           np.asarray(jit(*call_args), float),
                           rtol=1e-13, atol=1e-13)
        t_ref = best_of(ref, call_args, batch, args.repeats)
        t_jit = best_of(jit, call_args, batch, args.repeats)
        flag = "" if same else "   MISMATCH"
        print(f"{name:<20s} {batch:>6d} {t_ref * 1e3:>10.3f} {t_jit * 1e3:>10.3f} "
              f"{t_ref / t_jit:>7.2f}x{flag}")


if __name__ == "__main__":
    main()
