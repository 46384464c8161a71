"""Time the compiled, numpy and size-dispatched kernel backends on the same workloads.

Usage: python benchmarks/bench_kernels.py [--points N] [--components N] [--repeat N]
"""

import argparse
import timeit

import numpy as np

from eg2order import _backend


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=100_000)
    ap.add_argument("--components", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    n = args.components
    thetas, phis, alphas = rng.uniform(0.2, 4, n), rng.uniform(0.3, 3, n), rng.uniform(0.2, 5, n)
    x = np.geomspace(1e-2, 1e2, args.points)
    # the scalar path is what bisection refinement hammers
    x1 = np.array([1.3])

    cases = {
        "component_terms": lambda k: k.component_terms(thetas[0], phis[0], alphas[0], x),
        "system_terms": lambda k: k.system_terms(thetas, phis, alphas, x),
        "system_terms (256 pts)": lambda k: k.system_terms(thetas, phis, alphas, x[:: max(1, x.size // 256)][:256]),
        "system_terms (1 point)": lambda k: k.system_terms(thetas, phis, alphas, x1),
    }
    backends = _backend.available() + (["auto"] if "cython" in _backend.available() else [])
    print(f"points={args.points} components={n} backends={', '.join(backends)}")
    for label, fn in cases.items():
        times = {}
        for name in backends:
            k = _backend.get(name)
            number = 1000 if "1 point" in label else 20 if "256" in label else 3
            best = min(timeit.repeat(lambda: fn(k), number=number, repeat=args.repeat)) / number
            times[name] = best
        row = "  ".join(f"{name}={t * 1e3:9.4f} ms" for name, t in times.items())
        speedup = ""
        if "cython" in times:
            speedup = f"  speedup={times['python'] / times['cython']:.1f}x"
        print(f"{label:24s} {row}{speedup}")


if __name__ == "__main__":
    main()
