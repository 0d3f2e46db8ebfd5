#!/usr/bin/env python3
"""Timing comparison of the compiled kernels against the numpy fallback.

Run after an editable install:

    python3 benchmarks/bench_kernels.py [--n 2000] [--dim 256] [--repeats 3]

The numpy fallback leans on BLAS for the dense similarity products, so it
can win on topk_neighbors; the compiled core wins on the branchy,
sequential kernels (clustering, posting-list accumulation). Numbers are
wall-clock best-of-N on this machine.
"""

import argparse
import time

import numpy as np

from graphilosophy import kernels
from graphilosophy.kernels import pykernels


def unit_rows(rng, n, d):
    mat = rng.normal(size=(n, d))
    mat /= np.linalg.norm(mat, axis=1, keepdims=True)
    return np.ascontiguousarray(mat)


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=2000)
    parser.add_argument("--dim", type=int, default=256)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    impls = kernels.implementations()
    if "cython" not in impls:
        print("compiled extension not available; benchmarking fallback only")
    rng = np.random.default_rng(1)
    mat = unit_rows(rng, args.n, args.dim)

    n_terms, postings_per_term, n_docs = 64, args.n // 2, args.n
    doc_idx, tfs, offsets = [], [], [0]
    for _ in range(n_terms):
        docs = rng.choice(n_docs, size=postings_per_term, replace=False)
        doc_idx.extend(sorted(int(x) for x in docs))
        tfs.extend(int(x) for x in rng.integers(1, 9, size=postings_per_term))
        offsets.append(len(doc_idx))
    bm25_args = (
        n_docs,
        np.array(doc_idx, dtype=np.int64),
        np.array(tfs, dtype=np.int64),
        np.array(offsets, dtype=np.int64),
        rng.uniform(0.5, 4.0, size=n_terms),
        np.ascontiguousarray(rng.uniform(0.3, 2.0, size=n_docs)),
        1.2,
    )

    cases = {
        "coherence_series": lambda impl: impl.coherence_series(mat, 3),
        "topk_neighbors": lambda impl: impl.topk_neighbors(mat, 5, 0.3),
        "leader_cluster": lambda impl: impl.leader_cluster(mat, 0.55),
        "bm25_scores": lambda impl: impl.bm25_scores(*bm25_args),
    }

    print(f"n={args.n} dim={args.dim} repeats={args.repeats} (best-of)")
    header = f"{'kernel':<18}" + "".join(f"{name:>12}" for name in impls)
    if len(impls) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for case, fn in cases.items():
        times = {name: best_of(lambda impl=impl: fn(impl), args.repeats) for name, impl in impls.items()}
        row = f"{case:<18}" + "".join(f"{times[name] * 1e3:>10.1f}ms" for name in impls)
        if "cython" in times:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
