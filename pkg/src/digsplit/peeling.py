"""Degree cores, minimal cores, and the constructive splits built from them."""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from . import _kernels
from .digraph import (Bipartition, Digraph, DigraphError, induced_min_out_degree,
                      infer_parts, is_k_partite_tournament, is_strongly_connected,
                      side_degrees)
from .pairing import SplitFailure
from .probability import BadThreshold

log = logging.getLogger(__name__)


class CoreError(ValueError):
    """The starting set does not satisfy the degree requirement."""


class HypothesisError(ValueError):
    """Minimum out-degree below the sufficient bound (strict mode only)."""


class HypothesisWarning(UserWarning):
    pass


class SplitVerificationError(AssertionError):
    """A constructed split failed its own re-check."""


@dataclass(frozen=True)
class SplitSpec:
    s: int
    t: int
    k: int | None = None

    def __post_init__(self):
        if not 1 <= self.s <= self.t:
            raise ValueError(f"need 1 <= s <= t, got s={self.s}, t={self.t}")
        if self.k is not None and self.k < 2:
            raise ValueError("part count k must be >= 2")


Theta = int | np.ndarray | Callable[[int], int]


def theta_array(D: Digraph, theta: Theta) -> np.ndarray:
    if callable(theta):
        return np.array([int(theta(v)) for v in range(D.n)], dtype=np.int64)
    if np.isscalar(theta):
        return np.full(D.n, int(theta), dtype=np.int64)
    arr = np.asarray(theta, dtype=np.int64)
    if arr.shape != (D.n,):
        raise ValueError("threshold array must have one entry per vertex")
    return arr


def _member(D: Digraph, S: Iterable[int]) -> np.ndarray:
    alive = np.zeros(D.n, dtype=np.uint8)
    idx = [D._check(v) for v in S]
    alive[idx] = 1
    return alive


def max_core(D: Digraph, S: Iterable[int], theta: Theta) -> frozenset[int]:
    """Largest ``C`` inside ``S`` with ``d+_C(v) >= theta(v)`` for every ``v`` in ``C``.

    Violators are peeled until none remain; the result is unique, so the
    peeling order does not matter.
    """
    th = theta_array(D, theta)
    alive = _member(D, S)
    deg = _kernels.count_into(D.indptr, D.indices, alive)
    _kernels.core_peel(D.in_indptr, D.in_indices, alive, deg, th)
    return frozenset(np.flatnonzero(alive).tolist())


def satisfies(D: Digraph, S: Iterable[int], theta: Theta) -> bool:
    th = theta_array(D, theta)
    alive = _member(D, S)
    deg = _kernels.count_into(D.indptr, D.indices, alive)
    on = alive.astype(bool)
    return bool((deg[on] >= th[on]).all())


def minimal_core(D: Digraph, S: Iterable[int], theta: Theta) -> frozenset[int]:
    """A satisfying subset of ``S`` none of whose proper subsets satisfies ``theta``.

    Candidates are tried in increasing id order; deleting one is kept when the
    max core of what remains is nonempty.  A candidate that fails once fails
    for every smaller set too (max cores are monotone), so one pass over the
    ids gives the same set as restarting the scan after each shrink.
    """
    th = theta_array(D, theta)
    alive = _member(D, S)
    if not alive.any():
        raise CoreError("empty starting set")
    deg = _kernels.count_into(D.indptr, D.indices, alive)
    on = alive.astype(bool)
    if not (deg[on] >= th[on]).all():
        v = int(np.flatnonzero(on & (deg < th))[0])
        raise CoreError(f"vertex {v} has {deg[v]} out-neighbours in the set, needs {th[v]}")
    for v in np.flatnonzero(alive).tolist():
        if not alive[v]:
            continue
        trial = alive.copy()
        tdeg = deg.copy()
        trial[v] = 0
        tdeg[D.in_indices[D.in_indptr[v]:D.in_indptr[v + 1]]] -= 1
        if _kernels.core_peel(D.in_indptr, D.in_indices, trial, tdeg, th) > 0:
            alive, deg = trial, tdeg
    return frozenset(np.flatnonzero(alive).tolist())


def is_minimal_core(D: Digraph, A: Iterable[int], theta: Theta) -> bool:
    """Certificate check: ``A`` satisfies ``theta`` and ``max_core(A - v)`` is empty for every ``v``."""
    A = frozenset(A)
    if not A or not satisfies(D, A, theta):
        return False
    return all(not max_core(D, A - {v}, theta) for v in A)


def tight_in_neighbours(D: Digraph, A: Iterable[int], s: int) -> dict[int, int | None]:
    """For each ``v`` in ``A``: some in-neighbour ``u`` in ``A`` with ``d+_A(u) == s``, else ``None``."""
    A = sorted(A)
    alive = _member(D, A)
    deg = _kernels.count_into(D.indptr, D.indices, alive)
    out = {}
    for v in A:
        hit = [int(u) for u in D.in_neighbors(v) if alive[u] and deg[u] == s]
        out[v] = hit[0] if hit else None
    return out


def is_s_minimal(D: Digraph, s: int) -> bool:
    """Minimum out-degree ``s`` and no proper subdigraph keeps minimum out-degree ``s``.

    Deleting one out-arc of a vertex with out-degree above ``s`` leaves a
    proper subdigraph that still qualifies, so every out-degree must equal
    ``s``; then only vertex deletions remain to be ruled out.
    """
    if D.n == 0 or D.min_out_degree() < s:
        return False
    if (D.out_degrees != s).any():
        return False
    everything = frozenset(range(D.n))
    return all(not max_core(D, everything - {v}, s) for v in range(D.n))


# -- size bounds -------------------------------------------------------------

def lemma2_bound(s: int, k: int) -> Fraction | int:
    """Vertex bound for ``s``-minimal ``k``-partite tournaments.

    ``k == 2``: ``(s+1)^4 / (4s)``, inclusive (returned as a Fraction).
    ``k > 2``: ``max(2s(s+1)^2, 2ks(s+1))``, strict.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    if k < 2:
        raise ValueError("k must be >= 2")
    if k == 2:
        return Fraction((s + 1) ** 4, 4 * s)
    return max(2 * s * (s + 1) ** 2, 2 * k * s * (s + 1))


def max_minimal_vertices(s: int, k: int) -> int:
    """Largest vertex count the bound allows."""
    b = lemma2_bound(s, k)
    return math.floor(b) if k == 2 else b - 1


def split_min_degree(s: int, t: int, k: int) -> Fraction:
    """Sufficient minimum out-degree for an ``(s, t)``-split of a ``k``-partite tournament."""
    if k == 2:
        return t + lemma2_bound(s, 2) - s
    return Fraction(t + lemma2_bound(s, k))


# -- splits ------------------------------------------------------------------

@dataclass
class PeelResult:
    bipartition: Bipartition
    s: int
    t: int
    core_size: int
    hypothesis_met: bool | None
    stats: dict = field(default_factory=dict)

    success = True


def _verify_split(D: Digraph, A, B, s: int, t: int):
    """``None`` if ``delta+(D[A]) >= s`` and ``delta+(D[B]) >= t``, else (side, vertex, degree)."""
    for name, part, need in (("A", A, s), ("B", B, t)):
        if not part:
            return name, None, None
        alive = _member(D, part)
        deg = _kernels.count_into(D.indptr, D.indices, alive)
        for v in sorted(part):
            if deg[v] < need:
                return name, v, int(deg[v])
    return None


def peel_split(D: Digraph, s: int, t: int, *, hypothesis_met: bool | None = None):
    """``A`` = minimal core of ``V`` at threshold ``s``, ``B`` = the rest; re-verified."""
    spec = SplitSpec(s, t)
    if D.n == 0 or D.min_out_degree() < spec.s:
        return SplitFailure(f"minimum out-degree {D.min_out_degree()} below s={s}; no core",
                            0, None, stats={"s": s, "t": t})
    A = minimal_core(D, range(D.n), spec.s)
    B = frozenset(range(D.n)) - A
    problem = _verify_split(D, A, B, spec.s, spec.t)
    stats = {"core_size": len(A), "s": s, "t": t}
    if problem is not None:
        side, v, deg = problem
        msg = (f"part {side} is empty" if v is None else
               f"vertex {v} in part {side} has {deg} out-neighbours inside, needs "
               f"{s if side == 'A' else t}")
        if hypothesis_met:
            log.error("split failed although the degree hypothesis holds: %s", msg)
        stats.update({"violating_part": side, "violating_vertex": v, "degree": deg})
        return SplitFailure(msg, 1, None, stats=stats)
    return PeelResult(Bipartition(A, B), s, t, len(A), hypothesis_met, stats)


def split_multipartite(D: Digraph, spec: SplitSpec, *, strict: bool = False):
    """(s, t)-split of a multipartite tournament via its minimal ``s``-core.

    The degree hypothesis is sufficient, not necessary: below it a
    :class:`HypothesisWarning` is issued and the split is attempted anyway,
    unless ``strict`` is set.
    """
    parts = D.parts if D.parts is not None else infer_parts(D)
    k = len(parts) if parts is not None else 0
    if spec.k is not None and spec.k != k:
        raise DigraphError(f"expected a {spec.k}-partite tournament, found {k} parts")
    if not is_k_partite_tournament(D, k):
        raise DigraphError("input is not a multipartite tournament")
    need = split_min_degree(spec.s, spec.t, k)
    met = D.min_out_degree() >= need
    if not met:
        msg = f"minimum out-degree {D.min_out_degree()} below the sufficient bound {need}"
        if strict:
            raise HypothesisError(msg)
        warnings.warn(msg, HypothesisWarning, stacklevel=2)
    res = peel_split(D, spec.s, spec.t, hypothesis_met=met)
    res.stats.update({"k": k, "required_min_out_degree": str(need),
                      "lemma2_bound": str(lemma2_bound(spec.s, k))})
    return res


@dataclass
class StrongSplit:
    bipartition: Bipartition
    core_size: int
    stats: dict = field(default_factory=dict)

    success = True


def strong_split(T: Digraph, part: Bipartition, eps) -> StrongSplit:
    """Shrink ``A`` of a good bisection to a minimal core; ``T[A']`` is then strong.

    Vertices leaving ``A`` only gain out-neighbours on the other side, so the
    thresholds on ``B' = V - A'`` keep holding.
    """
    spec = BadThreshold.relative(eps)
    th = spec.thresholds(T.out_degrees)
    into_a, into_b = side_degrees(T, part)
    side = part.side_array(T.n)
    own = np.where(side == 0, into_a, into_b)
    other = np.where(side == 0, into_b, into_a)
    low = np.flatnonzero(np.minimum(own, other) < th)
    if len(low):
        raise SplitVerificationError(
            f"input bisection misses the threshold at vertex {int(low[0])}")
    A2 = minimal_core(T, part.A, th) if part.A else frozenset()
    B2 = frozenset(range(T.n)) - A2
    result = Bipartition(A2, B2)
    if A2 and not is_strongly_connected(T.induced_subdigraph(A2)):
        raise SplitVerificationError("T[A'] is not strongly connected")
    a2, b2 = side_degrees(T, result)
    side2 = result.side_array(T.n)
    own2 = np.where(side2 == 0, a2, b2)
    short = np.flatnonzero(own2 < th)
    if len(short):
        raise SplitVerificationError(f"vertex {int(short[0])} lost its threshold")
    return StrongSplit(result, len(A2), {"moved": len(part.A) - len(A2)})


__all__ = [
    "CoreError", "HypothesisError", "HypothesisWarning", "PeelResult", "SplitSpec",
    "SplitVerificationError", "StrongSplit", "induced_min_out_degree", "is_minimal_core",
    "is_s_minimal", "lemma2_bound", "max_minimal_vertices", "max_core", "minimal_core",
    "peel_split", "split_min_degree", "split_multipartite", "strong_split",
    "tight_in_neighbours",
]
