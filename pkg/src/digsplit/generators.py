"""Seeded instance generators.

All randomness goes through ``numpy.random.default_rng(seed)``, i.e. the PCG64
bit generator seeded via ``SeedSequence``.  That algorithm is fixed across
numpy releases and platforms, so a (parameters, seed) pair always names the
same instance.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .digraph import Digraph, DigraphError


def random_tournament(n: int, seed=None) -> Digraph:
    """Orient each pair ``{i, j}`` (``i < j``, row-major order) by a fair coin."""
    if n < 1:
        raise DigraphError("a tournament needs at least one vertex")
    rng = np.random.default_rng(seed)
    i, j = np.triu_indices(n, 1)
    flip = rng.integers(0, 2, size=len(i)).astype(bool)
    arcs = np.column_stack([np.where(flip, j, i), np.where(flip, i, j)])
    return Digraph(n, arcs)


def rotational_tournament(n: int) -> Digraph:
    """Vertex ``i`` beats ``i+1, ..., i+(n-1)/2`` modulo ``n``; regular of degree (n-1)/2."""
    if n < 1 or n % 2 == 0:
        raise DigraphError(f"rotational tournaments need an odd order, got {n}")
    half = (n - 1) // 2
    src = np.repeat(np.arange(n), half)
    dst = (src + np.tile(np.arange(1, half + 1), n)) % n
    return Digraph(n, np.column_stack([src, dst]))


def transitive_tournament(n: int) -> Digraph:
    """``i -> j`` for every ``i < j``."""
    i, j = np.triu_indices(n, 1)
    return Digraph(n, np.column_stack([i, j]))


def directed_cycle(n: int) -> Digraph:
    if n < 2:
        raise DigraphError("a directed cycle needs at least two vertices")
    src = np.arange(n)
    return Digraph(n, np.column_stack([src, (src + 1) % n]))


def random_k_partite_tournament(part_sizes: Sequence[int], seed=None) -> Digraph:
    """Parts are consecutive id blocks; each cross pair gets a fair-coin orientation."""
    sizes = [int(s) for s in part_sizes]
    if len(sizes) < 2:
        raise DigraphError("a multipartite tournament needs at least two parts")
    if any(s < 1 for s in sizes):
        raise DigraphError("every part must be nonempty")
    rng = np.random.default_rng(seed)
    n = sum(sizes)
    part_of = np.repeat(np.arange(len(sizes)), sizes)
    i, j = np.triu_indices(n, 1)
    cross = part_of[i] != part_of[j]
    i, j = i[cross], j[cross]
    flip = rng.integers(0, 2, size=len(i)).astype(bool)
    arcs = np.column_stack([np.where(flip, j, i), np.where(flip, i, j)])
    bounds = np.concatenate([[0], np.cumsum(sizes)])
    parts = [range(bounds[k], bounds[k + 1]) for k in range(len(sizes))]
    return Digraph(n, arcs, parts=parts)


def random_digraph_min_outdegree(n: int, d: int, seed=None) -> Digraph:
    """Every vertex gets exactly ``d`` distinct out-neighbours, uniformly (digons allowed)."""
    if d < 0 or d >= n:
        raise DigraphError(f"need 0 <= d < n, got d={d}, n={n}")
    rng = np.random.default_rng(seed)
    src, dst = [], []
    for v in range(n):
        pick = rng.choice(n - 1, size=d, replace=False)
        pick = pick + (pick >= v)
        src.append(np.full(d, v))
        dst.append(pick)
    arcs = np.column_stack([np.concatenate(src), np.concatenate(dst)]) if n else []
    return Digraph(n, arcs)


def disjoint_union(*graphs: Digraph) -> Digraph:
    """Relabel the inputs into consecutive blocks; parts are not carried over."""
    offset = 0
    chunks = []
    for g in graphs:
        chunks.append(g.arc_array + offset)
        offset += g.n
    arcs = np.concatenate(chunks) if chunks else np.empty((0, 2), dtype=np.int64)
    return Digraph(offset, arcs)


FAMILIES = {
    "tournament": "random_tournament(n, seed)",
    "rotational": "rotational_tournament(n)",
    "kpartite": "random_k_partite_tournament(parts, seed)",
    "minout": "random_digraph_min_outdegree(n, d, seed)",
}


def make_family(family: str, *, n: int | None = None, seed=None,
                parts: Sequence[int] | None = None, d: int | None = None) -> Digraph:
    """Dispatch on a family name from :data:`FAMILIES`."""
    if family == "tournament":
        return random_tournament(n, seed)
    if family == "rotational":
        return rotational_tournament(n)
    if family == "kpartite":
        return random_k_partite_tournament(parts, seed)
    if family == "minout":
        return random_digraph_min_outdegree(n, d, seed)
    raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
