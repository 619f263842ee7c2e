"""Compare the numba and numpy kernel backends.

    python benchmarks/bench_phi.py [--n 16,20,24] [--repeat 3] [--mc-samples 1000000]

For each n the exact value sweep, the value+gradient sweep and a Monte Carlo
estimate are timed on both backends (best of ``--repeat`` after one warm-up
call, so numba compilation is excluded) and the results are cross-checked.
"""
import argparse
import time

import numpy as np

from adplab import _accel
from adplab import phi_engine as pe
from adplab.reduction import ReducedConfig


def best_of(fn, repeat):
    fn()
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_config(n, seed=0):
    rng = np.random.default_rng(seed)
    t = rng.dirichlet(np.ones(n))
    alphas = 1.0 / (2 * n) + t / 2.0
    return ReducedConfig(alphas / alphas.sum(), rng.uniform(0.0, 1.0, n))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="16,20,24")
    ap.add_argument("--p", type=float, default=2.5)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--mc-samples", type=int, default=1_000_000)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args(argv)
    if args.threads:
        _accel.set_threads(args.threads)

    backends = ["numpy"] + (["numba"] if _accel.HAS_NUMBA else [])
    print(f"backends: {', '.join(backends)}   p = {args.p}")
    print(f"{'n':>3} {'kernel':>9} " + " ".join(f"{b + ' [s]':>12}" for b in backends) + "   ratio  max rel diff")
    for n in (int(x) for x in args.n.split(",")):
        rc = bench_config(n)
        tasks = {
            "phi": lambda b: pe.phi_exact(rc, args.p, backend=b).value,
            "gradient": lambda b: pe.phi_gradient(rc, args.p, backend=b)[1],
            "mc": lambda b: pe.phi_mc(rc, args.p, args.mc_samples, seed=1, backend=b).value,
        }
        for name, task in tasks.items():
            times, results = [], []
            for b in backends:
                dt, out = best_of(lambda: task(b), args.repeat)
                times.append(dt)
                results.append(np.atleast_1d(out))
            ratio = times[0] / times[-1]
            diff = float(np.max(np.abs(results[0] - results[-1]) / np.abs(results[-1])))
            cols = " ".join(f"{t:12.4f}" for t in times)
            print(f"{n:>3} {name:>9} {cols}   {ratio:5.2f}  {diff:.2e}")
    print("ratio = numpy time / numba time (> 1 means numba is faster)")


if __name__ == "__main__":
    main()
