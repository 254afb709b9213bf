"""The compiled kernels and the numpy fallback must agree exactly."""

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from digsplit import _kernels
from digsplit.generators import random_digraph_min_outdegree, random_tournament

BACKENDS = [_kernels.get_backend(name) for name in _kernels.available()]
needs_both = pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels not built")

graphs = st.integers(2, 40).flatmap(lambda n: st.builds(
    lambda d, seed: random_digraph_min_outdegree(n, d, seed=seed),
    st.integers(0, n - 1), st.integers(0, 10 ** 6)))


def _naive_counts(D, side):
    return np.array([sum(side[w] == side[v] for w in D.out_neighbors(v)) for v in range(D.n)])


@given(graphs, st.integers(0, 2 ** 32))
def test_same_side_counts(D, seed):
    side = np.random.default_rng(seed).integers(0, 2, D.n).astype(np.uint8)
    want = _naive_counts(D, side)
    for k in BACKENDS:
        assert (k.same_side_counts(D.indptr, D.indices, side) == want).all()
        batch = k.batch_same_side_counts(D.indptr, D.indices, np.stack([side, 1 - side]))
        assert (batch[0] == want).all() and (batch[1] == want).all()


@given(graphs, st.integers(0, 2 ** 32))
def test_count_into_and_recount(D, seed):
    rng = np.random.default_rng(seed)
    member = rng.integers(0, 2, D.n).astype(np.uint8)
    want = np.array([member[D.out_neighbors(v)].sum() for v in range(D.n)])
    side = rng.integers(0, 2, D.n).astype(np.uint8)
    for k in BACKENDS:
        assert (k.count_into(D.indptr, D.indices, member) == want).all()
        counts = np.zeros(D.n, dtype=np.int64)
        k.recount(D.indptr, D.indices, side, counts, np.arange(0, D.n, 2))
        full = _naive_counts(D, side)
        assert (counts[::2] == full[::2]).all() and (counts[1::2] == 0).all()


@given(graphs, st.integers(0, 4))
def test_core_peel(D, theta):
    results = []
    for k in BACKENDS:
        alive = np.ones(D.n, dtype=np.uint8)
        deg = D.out_degrees.copy()
        left = k.core_peel(D.in_indptr, D.in_indices, alive, deg, np.full(D.n, theta))
        assert left == alive.sum()
        results.append(alive.copy())
        on = alive.astype(bool)
        inside = np.array([alive[D.out_neighbors(v)].sum() for v in range(D.n)])
        assert (inside[on] >= theta).all()
    assert all((r == results[0]).all() for r in results)


@given(st.integers(2, 12), st.integers(0, 1000), st.integers(1, 3), st.integers(1, 3))
def test_split_scan(n, seed, s, t):
    D = random_tournament(n, seed=seed)
    masks = np.array(D.out_bits, dtype=np.uint64)
    found = {k.split_scan(masks, n, s, t, 1, n - 1) for k in BACKENDS}
    assert len(found) == 1


@needs_both
def test_env_override_selects_fallback():
    code = "from digsplit import _kernels; print(_kernels.BACKEND)"
    env = dict(os.environ, DIGSPLIT_KERNELS="python")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


@needs_both
def test_sampler_identical_under_both_backends():
    code = ("from digsplit import *; from digsplit.lll import moser_tardos_split;"
            "T = rotational_tournament(201);"
            "r = find_good_bisection(T, BadThreshold.relative(0.3), seed=5);"
            "m = moser_tardos_split(rotational_tournament(21), 0.1, seed=3);"
            "print(sorted(r.bipartition.A), sorted(m.bipartition.A), m.stats['resamples'])")
    outs = []
    for name in ("python", "cython"):
        env = dict(os.environ, DIGSPLIT_KERNELS=name)
        outs.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                                   text=True, check=True).stdout)
    assert outs[0] == outs[1]
