"""Brute-force ground truth for small instances.

Nothing here uses the closed-form probabilities; the point is to check them.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction

import numpy as np

from . import _kernels
from .digraph import Bipartition, Digraph, out_degree_into
from .peeling import is_s_minimal

XV_BUDGET = 24
SPLIT_BUDGET = 20
BISECTION_BUDGET = 26
SCAN_MAX_PART = 4


class BudgetExceeded(ValueError):
    pass


def exact_Xv_distribution(D: Digraph, v: int, pairing, budget: int = XV_BUDGET) -> dict[int, Fraction]:
    """Law of ``X_v`` by enumerating every split of the pairs that touch ``N+(v) + {v}``."""
    D._check(v)
    pairing.check(D.n)
    blocks = [tuple(p) for p in pairing.pairs]
    if pairing.singleton is not None:
        blocks.append((pairing.singleton,))
    touch = set(D.out_adj[v]) | {v}
    relevant = [b for b in blocks if touch.intersection(b)]
    if len(relevant) > budget:
        raise BudgetExceeded(f"{len(relevant)} relevant pairs exceed the budget of {budget}")
    nbrs = D.out_adj[v]
    counts: Counter[int] = Counter()
    for coins in itertools.product((0, 1), repeat=len(relevant)):
        side = {}
        for block, c in zip(relevant, coins):
            side[block[0]] = c
            if len(block) == 2:
                side[block[1]] = 1 - c
        counts[sum(1 for w in nbrs if side[w] == side[v])] += 1
    total = 2 ** len(relevant)
    return {x: Fraction(c, total) for x, c in sorted(counts.items())}


def tail_masses(dist: dict[int, Fraction], dplus: int, t: int) -> tuple[Fraction, Fraction]:
    """``(P(X < t), P(X > dplus - t))`` from a distribution."""
    few = sum((p for x, p in dist.items() if x < t), Fraction(0))
    many = sum((p for x, p in dist.items() if x > dplus - t), Fraction(0))
    return few, many


def exists_split(D: Digraph, s: int, t: int, bisection_only: bool = False):
    """Witness ``(A, B)``, both nonempty, with ``delta+(D[A]) >= s`` and ``delta+(D[B]) >= t``.

    Subsets ``A`` are scanned as bitmasks in increasing order, each one
    abandoned at its first failing vertex; the witness is the smallest mask.
    Returns ``None`` when the scan certifies that no split exists.
    """
    n = D.n
    cap = BISECTION_BUDGET if bisection_only else SPLIT_BUDGET
    if n > cap:
        raise BudgetExceeded(f"n = {n} exceeds the enumeration budget of {cap}")
    if n < 2:
        return None
    masks = np.array(D.out_bits, dtype=np.uint64)
    lo, hi = (n // 2, (n + 1) // 2) if bisection_only else (1, n - 1)
    found = _kernels.split_scan(masks, n, s, t, lo, hi)
    if found < 0:
        return None
    A = frozenset(v for v in range(n) if found >> v & 1)
    part = Bipartition.for_digraph(D, A)
    # independent re-check through plain degree queries
    assert all(out_degree_into(D, v, part.A) >= s for v in part.A)
    assert all(out_degree_into(D, v, part.B) >= t for v in part.B)
    return part


def _bipartite_orientations(p: int, q: int):
    """Out-degree vectors and arc lists for every orientation of ``K_{p,q}``.

    Bit ``i*q + j`` set means ``W_j -> U_i``, otherwise ``U_i -> W_j``; the
    vertices are ``U = 0..p-1`` and ``W = p..p+q-1``.
    """
    bits = p * q
    masks = np.arange(1 << bits, dtype=np.int64)
    grid = ((masks[:, None] >> np.arange(bits)) & 1).reshape(-1, p, q)
    out_u = q - grid.sum(axis=2)
    out_w = grid.sum(axis=1)
    return masks, np.concatenate([out_u, out_w], axis=1)


def exhaustive_bipartite_minimal_scan(max_part: int, s: int) -> list[Digraph]:
    """Every orientation of ``K_{p,q}``, ``1 <= p <= q <= max_part``, that is ``s``-minimal.

    No isomorphism rejection; ``(q, p)`` mirrors of ``(p, q)`` are skipped.
    """
    if max_part > SCAN_MAX_PART:
        raise BudgetExceeded(f"max_part = {max_part} exceeds {SCAN_MAX_PART}")
    found = []
    for p in range(1, max_part + 1):
        for q in range(p, max_part + 1):
            masks, degs = _bipartite_orientations(p, q)
            keep = masks[(degs == s).all(axis=1)]
            for mask in keep.tolist():
                arcs = []
                for i in range(p):
                    for j in range(q):
                        if mask >> (i * q + j) & 1:
                            arcs.append((p + j, i))
                        else:
                            arcs.append((i, p + j))
                D = Digraph(p + q, arcs, parts=[range(p), range(p, p + q)])
                if is_s_minimal(D, s):
                    found.append(D)
    return found
