"""Immutable simple digraphs, bipartitions and structural predicates."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class DigraphError(ValueError):
    """Invalid digraph data (loops, duplicate arcs, bad part structure)."""


class VertexError(DigraphError, KeyError):
    """A vertex id outside ``0..n-1``."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.flags.writeable = False
    return a


class Digraph:
    """A simple digraph on vertices ``0..n-1``.

    Antiparallel pairs are allowed; loops and repeated arcs are not.  When
    ``parts`` is given, every vertex must lie in exactly one part and every
    arc must join two different parts.  ``labels`` optionally records the
    original ids of the vertices (set by :meth:`induced_subdigraph`).

    Instances are frozen after construction, so they can be shared between
    threads freely.
    """

    def __init__(self, n: int, arcs=(), parts: Iterable[Iterable[int]] | None = None,
                 labels: Sequence[int] | None = None):
        n = int(n)
        if n < 0:
            raise DigraphError("vertex count must be non-negative")
        arr = np.asarray(list(arcs) if not isinstance(arcs, np.ndarray) else arcs,
                         dtype=np.int64).reshape(-1, 2)
        if len(arr):
            bad = (arr < 0) | (arr >= n)
            if bad.any():
                u, v = arr[np.flatnonzero(bad.any(axis=1))[0]]
                raise VertexError(f"arc ({u}, {v}) has an endpoint outside 0..{n - 1}")
            loops = np.flatnonzero(arr[:, 0] == arr[:, 1])
            if len(loops):
                raise DigraphError(f"loop at vertex {arr[loops[0], 0]}")
        key = arr[:, 0] * n + arr[:, 1]
        order = np.argsort(key, kind="stable")
        key = key[order]
        dup = np.flatnonzero(key[1:] == key[:-1])
        if len(dup):
            k = int(key[dup[0]])
            raise DigraphError(f"duplicate arc ({k // n}, {k % n})")
        arr = arr[order]

        part_tuple = None
        part_of = None
        if parts is not None:
            part_tuple = tuple(tuple(sorted(int(v) for v in p)) for p in parts)
            part_of = np.full(n, -1, dtype=np.int64)
            for i, p in enumerate(part_tuple):
                if not p:
                    raise DigraphError(f"part {i} is empty")
                for v in p:
                    if not 0 <= v < n:
                        raise VertexError(f"part {i} names unknown vertex {v}")
                    if part_of[v] != -1:
                        raise DigraphError(f"vertex {v} appears in two parts")
                    part_of[v] = i
            if (part_of < 0).any():
                raise DigraphError(f"vertex {int(np.flatnonzero(part_of < 0)[0])} is in no part")
            if len(arr):
                inside = np.flatnonzero(part_of[arr[:, 0]] == part_of[arr[:, 1]])
                if len(inside):
                    u, v = arr[inside[0]]
                    raise DigraphError(f"arc ({u}, {v}) lies inside part {part_of[u]}")
            part_of = _frozen(part_of)
        if labels is not None:
            labels = tuple(int(x) for x in labels)
            if len(labels) != n:
                raise DigraphError("labels must name every vertex")

        d = self.__dict__
        d["n"] = n
        d["parts"] = part_tuple
        d["part_of"] = part_of
        d["labels"] = labels
        d["arc_array"] = _frozen(arr)
        outdeg = np.bincount(arr[:, 0], minlength=n) if n else np.zeros(0, np.int64)
        d["indptr"] = _frozen(np.concatenate([[0], np.cumsum(outdeg)]))
        d["indices"] = _frozen(arr[:, 1])
        rev = np.lexsort((arr[:, 0], arr[:, 1]))
        indeg = np.bincount(arr[:, 1], minlength=n) if n else np.zeros(0, np.int64)
        d["in_indptr"] = _frozen(np.concatenate([[0], np.cumsum(indeg)]))
        d["in_indices"] = _frozen(arr[rev, 0])
        d["out_degrees"] = _frozen(outdeg)
        d["in_degrees"] = _frozen(indeg)

    def __setattr__(self, name, value):
        raise AttributeError("Digraph is immutable")

    def __delattr__(self, name):
        raise AttributeError("Digraph is immutable")

    # -- basic queries -------------------------------------------------

    @property
    def num_arcs(self) -> int:
        return len(self.arc_array)

    @cached_property
    def arcs(self) -> frozenset[tuple[int, int]]:
        return frozenset((int(u), int(v)) for u, v in self.arc_array)

    def vertices(self) -> range:
        return range(self.n)

    def _check(self, v) -> int:
        if isinstance(v, (bool, np.bool_)) or not isinstance(v, (int, np.integer)):
            raise VertexError(f"vertex id must be an integer, got {v!r}")
        if not 0 <= v < self.n:
            raise VertexError(f"unknown vertex {v} (n = {self.n})")
        return int(v)

    def out_neighbors(self, v: int) -> np.ndarray:
        v = self._check(v)
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def in_neighbors(self, v: int) -> np.ndarray:
        v = self._check(v)
        return self.in_indices[self.in_indptr[v]:self.in_indptr[v + 1]]

    @cached_property
    def out_adj(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(w) for w in self.out_neighbors(v)) for v in range(self.n))

    @cached_property
    def in_adj(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(w) for w in self.in_neighbors(v)) for v in range(self.n))

    @cached_property
    def out_bits(self) -> tuple[int, ...]:
        """Out-neighbourhoods as integer bitsets (bit ``w`` set iff ``v -> w``)."""
        return tuple(sum(1 << w for w in nbrs) for nbrs in self.out_adj)

    @cached_property
    def adjacency(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        m[self.arc_array[:, 0], self.arc_array[:, 1]] = True
        m.flags.writeable = False
        return m

    def has_arc(self, u: int, v: int) -> bool:
        u, v = self._check(u), self._check(v)
        return bool(self.out_bits[u] >> v & 1)

    def out_degree(self, v: int) -> int:
        return int(self.out_degrees[self._check(v)])

    def in_degree(self, v: int) -> int:
        return int(self.in_degrees[self._check(v)])

    def min_out_degree(self) -> int:
        return int(self.out_degrees.min()) if self.n else 0

    def max_in_degree(self) -> int:
        return int(self.in_degrees.max()) if self.n else 0

    def induced_subdigraph(self, S: Iterable[int]) -> Digraph:
        """Subdigraph on ``S`` relabelled ``0..|S|-1`` in increasing id order.

        The original ids are kept in ``labels``; parts are restricted and
        emptied parts dropped.
        """
        keep = sorted({self._check(v) for v in S})
        new_id = np.full(self.n, -1, dtype=np.int64)
        new_id[keep] = np.arange(len(keep))
        a = self.arc_array
        mask = (new_id[a[:, 0]] >= 0) & (new_id[a[:, 1]] >= 0)
        sub_arcs = new_id[a[mask]]
        parts = None
        if self.parts is not None:
            parts = [[int(new_id[v]) for v in p if new_id[v] >= 0] for p in self.parts]
            parts = [p for p in parts if p]
        old = self.labels
        labels = [old[v] if old is not None else v for v in keep]
        return Digraph(len(keep), sub_arcs, parts=parts, labels=labels)

    # -- dunder ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Digraph):
            return NotImplemented
        return (self.n == other.n and self.parts == other.parts
                and np.array_equal(self.arc_array, other.arc_array))

    def __hash__(self):
        return hash((self.n, self.parts, self.arc_array.tobytes()))

    def __repr__(self):
        extra = f", parts={len(self.parts)}" if self.parts is not None else ""
        return f"Digraph(n={self.n}, arcs={self.num_arcs}{extra})"


@dataclass(frozen=True)
class Bipartition:
    """Two disjoint vertex sets; see :meth:`for_digraph` for the cover check."""

    A: frozenset
    B: frozenset

    def __post_init__(self):
        object.__setattr__(self, "A", frozenset(int(v) for v in self.A))
        object.__setattr__(self, "B", frozenset(int(v) for v in self.B))
        common = self.A & self.B
        if common:
            raise DigraphError(f"vertex {min(common)} is in both A and B")

    @classmethod
    def for_digraph(cls, D: Digraph, A: Iterable[int], B: Iterable[int] | None = None):
        A = frozenset(D._check(v) for v in A)
        if B is None:
            B = frozenset(range(D.n)) - A
        else:
            B = frozenset(D._check(v) for v in B)
        part = cls(A, B)
        if len(A) + len(B) != D.n:
            missing = min(set(range(D.n)) - A - B)
            raise DigraphError(f"vertex {missing} is in neither A nor B")
        return part

    @classmethod
    def from_side(cls, side) -> Bipartition:
        """``side[v] == 0`` puts ``v`` in A, anything else in B."""
        side = np.asarray(side)
        return cls(frozenset(np.flatnonzero(side == 0).tolist()),
                   frozenset(np.flatnonzero(side != 0).tolist()))

    def side_array(self, n: int | None = None) -> np.ndarray:
        n = len(self.A) + len(self.B) if n is None else n
        side = np.ones(n, dtype=np.uint8)
        side[list(self.A)] = 0
        return side

    @property
    def is_bisection(self) -> bool:
        return abs(len(self.A) - len(self.B)) <= 1

    def part_of(self, v: int) -> frozenset:
        if v in self.A:
            return self.A
        if v in self.B:
            return self.B
        raise VertexError(f"vertex {v} is not covered")

    def swapped(self) -> Bipartition:
        return Bipartition(self.B, self.A)


def out_degree_into(D: Digraph, v: int, S) -> int:
    """Number of out-neighbours of ``v`` inside the vertex set ``S``."""
    nbrs = D.out_neighbors(v)
    if isinstance(S, np.ndarray) and S.dtype == bool:
        return int(S[nbrs].sum())
    return sum(1 for w in nbrs.tolist() if w in S)


def side_degrees(D: Digraph, part: Bipartition) -> tuple[np.ndarray, np.ndarray]:
    """Per-vertex out-degree into A and into B."""
    from . import _kernels

    side = part.side_array(D.n)
    into_b = _kernels.count_into(D.indptr, D.indices, side)
    return D.out_degrees - into_b, into_b


def induced_min_out_degree(D: Digraph, S) -> int | None:
    """delta^+(D[S]); ``None`` for an empty ``S``."""
    S = list(S)
    if not S:
        return None
    member = np.zeros(D.n, dtype=np.uint8)
    member[S] = 1
    from . import _kernels

    counts = _kernels.count_into(D.indptr, D.indices, member)
    return int(counts[S].min())


def is_tournament(D: Digraph) -> bool:
    if D.num_arcs != D.n * (D.n - 1) // 2:
        return False
    a = D.arc_array
    lo = np.minimum(a[:, 0], a[:, 1])
    hi = np.maximum(a[:, 0], a[:, 1])
    return len(np.unique(lo * D.n + hi)) == D.num_arcs


def infer_parts(D: Digraph) -> list[list[int]] | None:
    """Classes of the non-adjacency relation, or ``None`` if it is not transitive."""
    adj = D.adjacency | D.adjacency.T
    seen = np.zeros(D.n, dtype=bool)
    parts = []
    for v in range(D.n):
        if seen[v]:
            continue
        cls = np.flatnonzero(~adj[v])
        if seen[cls].any():
            return None
        block = adj[np.ix_(cls, cls)]
        if block.any():
            return None
        seen[cls] = True
        parts.append(cls.tolist())
    if not seen.all():
        return None
    return parts


def is_k_partite_tournament(D: Digraph, k: int) -> bool:
    """Orientation of a complete k-partite graph, using ``D.parts`` when present."""
    parts = D.parts if D.parts is not None else infer_parts(D)
    if parts is None or len(parts) != k or k < 2:
        return False
    part_of = np.empty(D.n, dtype=np.int64)
    for i, p in enumerate(parts):
        part_of[list(p)] = i
    a = D.arc_array
    if (part_of[a[:, 0]] == part_of[a[:, 1]]).any():
        return False
    sizes = np.array([len(p) for p in parts])
    cross = (sizes.sum() ** 2 - (sizes ** 2).sum()) // 2
    if D.num_arcs != cross:
        return False
    lo = np.minimum(a[:, 0], a[:, 1])
    hi = np.maximum(a[:, 0], a[:, 1])
    return len(np.unique(lo * D.n + hi)) == D.num_arcs


def strongly_connected_components(D: Digraph) -> list[list[int]]:
    """Tarjan's algorithm, iterative; components come out in reverse topological order."""
    n = D.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    indptr, indices = D.indptr, D.indices
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, int(indptr[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, j = work[-1]
            end = int(indptr[v + 1])
            if j < end:
                work[-1] = (v, j + 1)
                w = int(indices[j])
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, int(indptr[w])))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def is_strongly_connected(D: Digraph) -> bool:
    if D.n == 0:
        raise DigraphError("strong connectivity needs at least one vertex")
    return len(strongly_connected_components(D)) == 1
