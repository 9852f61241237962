"""Time the compiled Jacobi kernel against the numpy fallback.

    python3 benchmarks/bench_eig.py --sizes 20 50 100 200 --repeat 3
"""
import argparse
import time

import numpy as np

from gapforge.constructions import generate
from gapforge.eig import _jacobi_c, eigensolve_symmetric
from gapforge.graph import laplacian0


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 50, 100, 200])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    backends = ["python"] + (["compiled"] if _jacobi_c is not None else [])
    if _jacobi_c is None:
        print("compiled kernel not built; timing the fallback only")
    print(f"{'n':>5} " + " ".join(f"{b:>12}" for b in backends) + f" {'speedup':>8} {'max|diff|':>10}")
    for n in args.sizes:
        m = laplacian0(generate("regular_random", {"n": n, "k": 3}, args.seed)).entries
        times, vals = {}, {}
        for b in backends:
            times[b] = best_time(lambda: eigensolve_symmetric(m, backend=b), args.repeat)
            vals[b] = eigensolve_symmetric(m, backend=b).values
        ref = np.linalg.eigvalsh(m)
        diff = max(float(np.max(np.abs(v - ref))) for v in vals.values())
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{n:>5} " + " ".join(f"{times[b]:>11.4f}s" for b in backends)
              + f" {speed:>8.1f} {diff:>10.1e}")


if __name__ == "__main__":
    main()
