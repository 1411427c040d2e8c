"""Compare the compiled and numpy evaluation kernels.

    python benchmarks/bench_kernels.py [--points N] [--repeat R]

Prints throughput of both backends on the same points and their largest
disagreement.
"""
import argparse
import cmath
import math
import time

import numpy as np

from elliptica import _backend
from elliptica.lattice import Lattice
from elliptica.weierstrass import make_context


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    lattices = {"square": Lattice(1, 1j), "hexagonal": Lattice(1, cmath.exp(1j * math.pi / 3)),
                "generic": Lattice(1, 0.3 + 1.2j), "tall (cosets)": Lattice(1, 3j)}
    backends = ["python"] + (["compiled"] if _backend.compiled_kernels is not None else [])
    print(f"{'lattice':<15}" + "".join(f"{b + ' Mpt/s':>16}" for b in backends) + f"{'speedup':>10}{'max rel diff':>14}")
    for name, lat in lattices.items():
        ctx = make_context(lat)
        z = (rng.random(args.points) * 4 - 2) * lat.omega1 + (rng.random(args.points) * 4 - 2) * lat.omega2
        rates, vals = [], []
        for b in backends:
            t = best_time(lambda: ctx.evaluate(z, backend=b), args.repeat)
            rates.append(args.points / t / 1e6)
            vals.append(ctx.evaluate(z, backend=b)[0])
        line = f"{name:<15}" + "".join(f"{r:>16.2f}" for r in rates)
        if len(backends) == 2:
            ok = np.isfinite(vals[0])
            diff = np.max(np.abs(vals[0][ok] - vals[1][ok]) / (1 + np.abs(vals[0][ok])))
            line += f"{rates[1] / rates[0]:>9.1f}x{diff:>14.1e}"
        print(line)


if __name__ == "__main__":
    main()
