"""Time the compatibility and BFS kernels, numba against plain numpy.

    python3 benchmarks/bench_kernels.py [--n 5] [--repeat 5]
"""
from __future__ import annotations

import argparse
import random
import time

import numpy as np

from bimatch import _kernels
from bimatch.explorer import crossing_table, enumerate_matchings
from bimatch.matching import BichromaticPointSet


def random_points(n: int, seed: int) -> BichromaticPointSet:
    rng = random.Random(seed)
    while True:
        pts = list({(rng.randint(0, 10 ** 4), rng.randint(0, 10 ** 4)) for _ in range(2 * n)})
        if len(pts) < 2 * n:
            continue
        try:
            return BichromaticPointSet.from_coords(pts[:n], pts[n:2 * n])
        except ValueError:
            pass


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    P = random_points(args.n, args.seed)
    nodes = enumerate_matchings(P, cap=args.n)
    assign = np.array([[dict(m.pairs)[r] for r in range(P.n)] for m in nodes], dtype=np.int64)
    crosses = crossing_table(P)
    print(f"n={args.n}  matchings={len(nodes)}  numba available={_kernels.HAVE_NUMBA}")

    adj_np = _kernels.compat_matrix(assign, crosses, use_numba=False)
    t_np = best_of(lambda: _kernels.compat_matrix(assign, crosses, use_numba=False), args.repeat)
    t_bfs_np = best_of(lambda: _kernels.bfs_all(adj_np, use_numba=False), args.repeat)
    print(f"compat  numpy {t_np * 1e3:9.3f} ms")
    print(f"bfs     numpy {t_bfs_np * 1e3:9.3f} ms")
    if _kernels.HAVE_NUMBA:
        adj_nb = _kernels.compat_matrix(assign, crosses, use_numba=True)     # warm up / compile
        _kernels.bfs_all(adj_nb, use_numba=True)
        assert (adj_nb == adj_np).all()
        t_nb = best_of(lambda: _kernels.compat_matrix(assign, crosses, use_numba=True), args.repeat)
        t_bfs_nb = best_of(lambda: _kernels.bfs_all(adj_nb, use_numba=True), args.repeat)
        print(f"compat  numba {t_nb * 1e3:9.3f} ms  ({t_np / t_nb:.1f}x)")
        print(f"bfs     numba {t_bfs_nb * 1e3:9.3f} ms  ({t_bfs_np / t_bfs_nb:.1f}x)")


if __name__ == "__main__":
    main()
