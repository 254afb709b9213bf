"""Compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--n 2001] [--repeat 5]

Each row times one kernel on both backends (best of ``--repeat``) and
checks that the outputs agree before reporting the speed-up.  Backends are
called directly, bypassing the dispatcher in ``digsplit._kernels`` (which
sends batches with n <= 4096 to the dense matmul on both backends).
"""

import argparse
import time

import numpy as np

from digsplit import _kernels
from digsplit.generators import random_digraph_min_outdegree, random_tournament, rotational_tournament
from digsplit.pairing import random_pairing


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(n, rng):
    T = rotational_tournament(n if n % 2 else n + 1)
    side = rng.integers(0, 2, T.n).astype(np.uint8)
    p = random_pairing(T.n, rng)
    sides = p.sides(rng.integers(0, 2, (256, p.num_coins), dtype=np.uint8))
    sparse = random_digraph_min_outdegree(20 * n, 6, seed=1)
    small = random_tournament(18, seed=3)
    verts = rng.choice(T.n, size=T.n // 10, replace=False)

    # a few vertices demand more than their degree; the removals cascade
    theta = np.where(rng.random(sparse.n) < 0.05, 7, 5)

    def peel(k):
        alive = np.ones(sparse.n, dtype=np.uint8)
        deg = sparse.out_degrees.copy()
        return k.core_peel(sparse.in_indptr, sparse.in_indices, alive, deg, theta), alive

    def recount(k):
        counts = np.zeros(T.n, dtype=np.int64)
        k.recount(T.indptr, T.indices, side, counts, verts)
        return counts

    masks = np.array(small.out_bits, dtype=np.uint64)
    return {
        f"same_side_counts (rot {T.n})": lambda k: k.same_side_counts(T.indptr, T.indices, side),
        f"batch_same_side_counts (256 x {T.n}; numpy=matmul)":
            lambda k: k.batch_same_side_counts(T.indptr, T.indices, sides),
        f"recount ({len(verts)} vertices)": recount,
        f"core_peel (n={sparse.n}, d+=6, theta 5 or 7)": peel,
        "split_scan (tournament n=18, s=t=3)": lambda k: k.split_scan(masks, 18, 3, 3, 1, 17),
    }


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2001)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if "cython" not in _kernels.available():
        raise SystemExit("compiled kernels are not built; run `pip install -e .` first")
    cy, py = _kernels.get_backend("cython"), _kernels.get_backend("python")
    print(f"{'kernel':44s} {'cython':>11s} {'numpy':>11s} {'speed-up':>9s}")
    for name, fn in cases(args.n, np.random.default_rng(0)).items():
        tc, oc = best_of(lambda: fn(cy), args.repeat)
        tp, op = best_of(lambda: fn(py), args.repeat)
        if not same(oc, op):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:44s} {tc * 1e3:9.3f}ms {tp * 1e3:9.3f}ms {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
