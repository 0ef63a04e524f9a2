#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the three hot paths (clique enumeration, boundary assembly, GF(p)
rank) on generated graphs of increasing size and prints a speedup table.

Usage:
    python benchmarks/bench_kernels.py [--sizes 1000 2000 4000] [--m 7]
    [--delta -5 --p 2]
"""

from __future__ import annotations

import argparse
import time

from pacx import PAParams, collapse, generate_polya
from pacx.kernels import get_backend


def bench_one(backend, simple, dim_cap, p):
    indptr, indices = simple.higher_csr()
    t0 = time.perf_counter()
    cliques = backend.enumerate_cliques(indptr, indices, simple.n,
                                        dim_cap + 1, 10 ** 9)
    t1 = time.perf_counter()
    ranks = []
    for q in range(1, dim_cap + 1):
        csc = backend.boundary_csc(cliques[q], cliques[q - 1], p)
        ranks.append(backend.rank_csc(*csc, cliques[q - 1].shape[0], p))
    t2 = time.perf_counter()
    return t1 - t0, t2 - t1, [a.shape[0] for a in cliques], ranks


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+",
                    default=[1000, 2000, 4000, 8000])
    ap.add_argument("--m", type=int, default=7)
    ap.add_argument("--delta", type=float, default=-5.0)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--dim-cap", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = {}
    backends["pure-python"] = get_backend("pure-python")
    try:
        backends["compiled"] = get_backend("compiled")
    except ImportError:
        print("compiled backend unavailable; benchmarking fallback only")

    header = (f"{'T':>7} {'f-vector':>28} "
              + " ".join(f"{name + ' cliq/rank (s)':>28}"
                         for name in backends)
              + f" {'speedup':>8}")
    print(header)
    for T in args.sizes:
        g = generate_polya(PAParams(T, args.m, args.delta, seed=args.seed))
        simple = collapse(g)
        row = f"{T:>7}"
        times = {}
        for name, backend in backends.items():
            tc, tr, fvec, ranks = bench_one(backend, simple, args.dim_cap,
                                            args.p)
            times[name] = tc + tr
            if name == next(iter(backends)):
                row += f" {str(fvec):>28}"
            row += f" {tc:>14.3f}{tr:>14.3f}"
        if len(times) == 2:
            pure, comp = times["pure-python"], times["compiled"]
            row += f" {pure / comp:>7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
