"""Compare the compiled and pure-Python kernels on the hot paths.

    python benchmarks/bench_kernels.py [--repeat 5] [--levels 20000]

Each row times one kernel call on both backends and checks that the
results agree.
"""
import argparse
import random
import sys
import time

from polyrigid import CocycleSystem, CyclicProduct, build_spec, subgroup_closure
from polyrigid import _kernels
from polyrigid.cocycle import level_plan, row_plan


def system(moduli, gens, T):
    V = CyclicProduct(moduli)
    return CocycleSystem(build_spec(len(moduli), moduli, T), subgroup_closure(V, gens))


def best_of(repeat, fn):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def cases(levels):
    rng = random.Random(0)
    s3 = system((2, 2), [(1, 1)], 3)
    s4 = system((2, 2), [(1, 1)], 4)
    z3 = system((3, 3), [(1, 1)], 3)
    bp = row_plan(s3, 3, 2)
    starts = list(range(min(bp.rho, levels)))
    yield "window_sums  diag Z2^2 stage 2", lambda b: _kernels.window_sums(starts, 16, bp, b)
    yield "boundary_counts  diag Z2^2 stage 2", lambda b: _kernels.boundary_counts(starts, 16, bp, b)
    for name, s, T in (("diag Z2^2 T=3", s3, 3), ("diag Z3^2 T=3", z3, 3), ("diag Z2^2 T=4", s4, 4)):
        nT = s.spec.n(T)
        lv = [rng.randrange(nT // 2) for _ in range(levels)]
        lp = level_plan(s, 1, T)
        m = s.spec.n(T - 1) * 3
        yield f"birkhoff_many  {name}", lambda b, lv=lv, lp=lp, m=m: _kernels.birkhoff_many(lv, m, lp, b)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--levels", type=int, default=20000)
    args = p.parse_args(argv)
    if not _kernels.COMPILED_AVAILABLE:
        print("compiled kernels are not built; only the python backend is available")
        return 1
    print(f"{'kernel':<40}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for name, fn in cases(args.levels):
        tp, a = best_of(args.repeat, lambda: fn("python"))
        tc, b = best_of(args.repeat, lambda: fn("cython"))
        if a != b:
            print(f"{name}: backends disagree")
            return 1
        print(f"{name:<40}{tp * 1e3:>14.2f}{tc * 1e3:>14.2f}{tp / tc:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
