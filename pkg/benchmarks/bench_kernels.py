"""Compare the compiled and pure-Python orbit kernels on canonicalization workloads.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
from __future__ import annotations

import argparse
import random
import time

from symstab import _kernels_py, kernels
from symstab.covering import make_double_cover, standard_ell

try:
    from symstab import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None


def workload(g: int, modulus: int, count: int, seed: int = 0):
    cov = make_double_cover(g, standard_ell(g))
    shifts = cov.shifts(modulus)
    rng = random.Random(seed)
    width = len(shifts[0])
    vecs = [tuple(rng.randrange(modulus) for _ in range(width)) for _ in range(count)]
    return vecs, shifts


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--count", type=int, default=20000)
    args = ap.parse_args()
    print(f"selected backend: {kernels.BACKEND}")
    print(f"{'genus':>5} {'|K|':>5} {'vectors':>8} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for g, modulus in [(2, 12), (3, 12), (4, 12)]:
        vecs, shifts = workload(g, modulus, args.count)
        t_py = best_of(lambda: _kernels_py.batch_orbit_min(vecs, shifts, modulus), args.repeat)
        if _compiled is None:
            print(f"{g:>5} {len(shifts):>5} {len(vecs):>8} {t_py:>10.3f} {'n/a':>11} {'n/a':>8}")
            continue
        t_c = best_of(lambda: _compiled.batch_orbit_min(vecs, shifts, modulus), args.repeat)
        assert _compiled.batch_orbit_min(vecs, shifts, modulus) == _kernels_py.batch_orbit_min(vecs, shifts, modulus)
        print(f"{g:>5} {len(shifts):>5} {len(vecs):>8} {t_py:>10.3f} {t_c:>11.3f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
