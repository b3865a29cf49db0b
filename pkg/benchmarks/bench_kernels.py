"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--family hermitian:3,2 ...]

The numba column excludes JIT compilation (one warm-up call per kernel).
"""

import argparse
import time

import numpy as np

from drgkit import _accel, kernels
from drgkit.families import gen_family
from drgkit.graph import DistanceOracle


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(spec):
    g = gen_family(spec).graph
    ip, ix = g.indptr, g.indices
    rng = np.random.default_rng(0)
    sources = np.sort(rng.choice(g.n, size=min(g.n, 32), replace=False)).astype(np.int64)
    d0 = kernels.bfs_np(ip, ix, 0)
    target = np.zeros(g.n, dtype=bool)
    target[np.flatnonzero(d0 == d0.max())[:3]] = True
    members = rng.choice(g.n, size=min(g.n, 8), replace=False).astype(np.int64)
    rows = DistanceOracle(g).rows(members)
    new_pos = np.arange(len(members) // 2, len(members), dtype=np.int64)
    out = {
        "bfs": lambda k: k["bfs"](ip, ix, 0),
        "multi_bfs": lambda k: k["multi_bfs"](ip, ix, sources),
        "layer_counts": lambda k: k["layer_counts"](ip, ix, d0),
        "closure_round": lambda k: k["closure_round"](rows, members, new_pos),
        "interval_mark": lambda k: k["interval_mark"](ip, ix, d0, target),
    }
    if g.n <= 1024:
        dmat = DistanceOracle(g).matrix()
        out["parallelograms"] = lambda k: k["parallelograms"](ip, ix, dmat, 2, False)
    return g, out


def table(suffix):
    names = ("bfs", "multi_bfs", "layer_counts", "closure_round", "interval_mark", "parallelograms")
    return {name: getattr(kernels, f"{name}_{suffix}") for name in names}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--family", action="append",
                    default=None, help="family spec; may be repeated")
    args = ap.parse_args()
    families = args.family or ["hypercube:6", "johnson:10,4", "hermitian:3,2"]
    if not _accel.NUMBA_AVAILABLE:
        print("numba is not installed; only the numpy column is meaningful")
    np_k = table("np")
    nb_k = table("nb") if _accel.NUMBA_AVAILABLE else np_k
    print(f"{'graph':<24}{'kernel':<16}{'numpy [ms]':>12}{'numba [ms]':>12}{'speed-up':>10}")
    for spec in families:
        g, fns = cases(spec)
        for name, fn in fns.items():
            fn(nb_k)  # compile
            t_np = best_of(lambda: fn(np_k), args.repeat)
            t_nb = best_of(lambda: fn(nb_k), args.repeat)
            print(f"{spec + ' n=' + str(g.n):<24}{name:<16}{1e3 * t_np:>12.3f}"
                  f"{1e3 * t_nb:>12.3f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
