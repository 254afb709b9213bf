"""Random pairing bisections: pair the vertices, split every pair by a coin, retry."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .digraph import Bipartition, Digraph, DigraphError
from .probability import BadThreshold, as_threshold

log = logging.getLogger(__name__)

DEFAULT_MAX_TRIALS = 64


@dataclass(frozen=True)
class Pairing:
    """Disjoint pairs plus an optional unpaired vertex, together covering ``0..n-1``."""

    pairs: tuple[tuple[int, int], ...]
    singleton: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(u), int(w)) for u, w in self.pairs))
        if self.singleton is not None:
            object.__setattr__(self, "singleton", int(self.singleton))
        seen = [v for p in self.pairs for v in p]
        if self.singleton is not None:
            seen.append(self.singleton)
        if len(set(seen)) != len(seen):
            raise DigraphError("pairing uses a vertex twice")
        if sorted(seen) != list(range(len(seen))):
            raise DigraphError("pairing must cover vertices 0..n-1 exactly")

    @property
    def n(self) -> int:
        return 2 * len(self.pairs) + (self.singleton is not None)

    def check(self, n: int):
        if self.n != n:
            raise DigraphError(f"pairing covers {self.n} vertices, digraph has {n}")

    def pair_ids(self, n: int | None = None) -> np.ndarray:
        """Index of the pair holding each vertex; the singleton gets ``len(pairs)``."""
        ids = np.empty(self.n, dtype=np.int64)
        arr = self.arrays()
        ids[arr[0]] = np.arange(len(self.pairs))
        ids[arr[1]] = np.arange(len(self.pairs))
        if self.singleton is not None:
            ids[self.singleton] = len(self.pairs)
        return ids

    def partner_array(self, n: int | None = None) -> np.ndarray:
        out = np.full(self.n, -1, dtype=np.int64)
        u, w = self.arrays()
        out[u] = w
        out[w] = u
        return out

    def partner(self, v: int) -> int | None:
        p = int(self.partner_array()[v])
        return None if p < 0 else p

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.pairs:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
        a = np.asarray(self.pairs, dtype=np.int64)
        return a[:, 0], a[:, 1]

    @property
    def num_coins(self) -> int:
        return len(self.pairs) + (self.singleton is not None)

    def sides(self, coins) -> np.ndarray:
        """Side arrays (0 = A) for a coin vector or a matrix of coin rows.

        Coin ``i`` puts the first vertex of pair ``i`` on side ``coin``; the
        last coin, if there is a singleton, is the singleton's side.
        """
        coins = np.asarray(coins, dtype=np.uint8)
        single = coins.ndim == 1
        coins = np.atleast_2d(coins)
        u, w = self.arrays()
        out = np.empty((coins.shape[0], self.n), dtype=np.uint8)
        k = len(self.pairs)
        out[:, u] = coins[:, :k]
        out[:, w] = 1 - coins[:, :k]
        if self.singleton is not None:
            out[:, self.singleton] = coins[:, k]
        return out[0] if single else out

    def to_json(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs], "singleton": self.singleton}

    @classmethod
    def from_json(cls, doc: dict) -> Pairing:
        return cls(tuple(tuple(p) for p in doc["pairs"]), doc.get("singleton"))


@dataclass(frozen=True)
class BadVertex:
    vertex: int
    x: int  # out-neighbours on the vertex's own side
    t: int


@dataclass
class SampleReport:
    """Outcome of one successful (or best-effort) sampled bisection."""

    bipartition: Bipartition
    bad: list[BadVertex]
    trials_used: int
    seed: int | None
    stats: dict = field(default_factory=dict)

    @property
    def success(self) -> bool:
        return not self.bad


@dataclass
class SplitFailure:
    """Structured give-up result; not raised."""

    reason: str
    trials_used: int
    seed: int | None
    best: SampleReport | None = None
    stats: dict = field(default_factory=dict)

    success = False


def _rng(seed, index=None):
    ss = np.random.SeedSequence(seed) if index is None else np.random.SeedSequence(
        seed, spawn_key=(index,))
    return np.random.default_rng(ss)


def normalise_seed(seed) -> int:
    """Turn ``None`` into fresh entropy so the run can still be replayed."""
    if seed is None:
        return int(np.random.SeedSequence().entropy)
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    return seed


def random_pairing(D_or_n, seed=None) -> Pairing:
    """Uniform random pairing of ``0..n-1``; the last vertex of the permutation is left over for odd n."""
    n = D_or_n.n if isinstance(D_or_n, Digraph) else int(D_or_n)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    perm = rng.permutation(n)
    k = n // 2
    pairs = tuple(zip(perm[0:2 * k:2].tolist(), perm[1:2 * k:2].tolist()))
    return Pairing(pairs, int(perm[-1]) if n % 2 else None)


def sample_split(pairing: Pairing, seed=None) -> Bipartition:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    coins = rng.integers(0, 2, size=pairing.num_coins, dtype=np.uint8)
    return Bipartition.from_side(pairing.sides(coins))


def _bad_mask(x, dplus, t):
    return (x < t) | (x > dplus - t)


def bad_vertices(D: Digraph, part: Bipartition, spec) -> list[BadVertex]:
    """Vertices with fewer than ``t`` out-neighbours on their own side or on the other."""
    spec = as_threshold(spec)
    side = part.side_array(D.n)
    if len(part.A) + len(part.B) != D.n:
        raise DigraphError("bipartition does not cover the digraph")
    x = _kernels.same_side_counts(D.indptr, D.indices, side)
    t = spec.thresholds(D.out_degrees)
    idx = np.flatnonzero(_bad_mask(x, D.out_degrees, t))
    return [BadVertex(int(v), int(x[v]), int(t[v])) for v in idx]


def _trial(D, spec_t, seed, index):
    rng = _rng(seed, index)
    pairing = random_pairing(D.n, rng)
    side = pairing.sides(rng.integers(0, 2, size=pairing.num_coins, dtype=np.uint8))
    x = _kernels.same_side_counts(D.indptr, D.indices, side)
    mask = _bad_mask(x, D.out_degrees, spec_t)
    return side, x, mask


def find_good_bisection(D: Digraph, spec, max_trials: int = DEFAULT_MAX_TRIALS, seed=0,
                        jobs: int = 1):
    """Resample pairing and coins until no vertex is bad.

    Trial ``i`` draws from its own stream ``SeedSequence(seed, spawn_key=(i,))``,
    so the result does not depend on ``jobs``.  Returns a :class:`SampleReport`
    on success and a :class:`SplitFailure` (carrying the best trial seen)
    when ``max_trials`` runs out.
    """
    if max_trials < 1:
        raise ValueError("max_trials must be >= 1")
    spec = as_threshold(spec)
    seed = normalise_seed(seed)
    spec_t = spec.thresholds(D.out_degrees)
    history: list[int] = []
    best = None
    jobs = max(1, int(jobs))
    pool = ThreadPoolExecutor(jobs) if jobs > 1 else None
    try:
        for start in range(0, max_trials, jobs):
            idx = range(start, min(start + jobs, max_trials))
            if pool is None:
                results = [_trial(D, spec_t, seed, i) for i in idx]
            else:
                results = list(pool.map(lambda i: _trial(D, spec_t, seed, i), idx))
            for i, (side, x, mask) in zip(idx, results):
                nbad = int(mask.sum())
                history.append(nbad)
                log.debug("trial %d: %d bad vertices", i, nbad)
                if best is None or nbad < best[0]:
                    best = (nbad, i, side, x, mask)
                if nbad == 0:
                    return SampleReport(Bipartition.from_side(side), [], i + 1, seed,
                                        {"bad_history": history, "spec": spec.describe()})
    finally:
        if pool is not None:
            pool.shutdown()
    nbad, i, side, x, mask = best
    bad = [BadVertex(int(v), int(x[v]), int(spec_t[v])) for v in np.flatnonzero(mask)]
    best_report = SampleReport(Bipartition.from_side(side), bad, i + 1, seed,
                               {"spec": spec.describe()})
    return SplitFailure(f"no good bisection in {max_trials} trials", max_trials, seed,
                        best_report, {"bad_history": history, "best_bad": nbad,
                                      "spec": spec.describe()})


@dataclass
class BadEventCounts:
    """Per-vertex event counts over repeated splits of one fixed pairing."""

    samples: int
    too_few: np.ndarray
    too_many: np.ndarray
    bad_per_sample: np.ndarray

    @property
    def mean_bad(self) -> float:
        return float(self.bad_per_sample.mean()) if self.samples else float("nan")

    @property
    def stderr_bad(self) -> float:
        if self.samples < 2:
            return float("nan")
        return float(self.bad_per_sample.std(ddof=1) / np.sqrt(self.samples))


def _coin_block(rng, rows: int, width: int) -> np.ndarray:
    """``rows x width`` fair bits taken from whole 64-bit draws.

    Full-range words consume the stream without rejection, so splitting
    the same sample count into different batches yields the same coins.
    """
    words = rng.integers(0, np.iinfo(np.uint64).max, size=(rows, -(-width // 64)),
                         dtype=np.uint64, endpoint=True)
    raw = words.astype("<u8").view(np.uint8)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :width]


def monte_carlo_bad_events(D: Digraph, pairing: Pairing, spec, samples: int, seed=0,
                           batch: int = 8192) -> BadEventCounts:
    """Split ``pairing`` ``samples`` times; count ``X_v < t`` and ``X_v > d+ - t`` events.

    Sample ``j`` uses the same coins whatever ``batch`` is.
    """
    pairing.check(D.n)
    spec = as_threshold(spec)
    t = spec.thresholds(D.out_degrees)
    dplus = D.out_degrees
    rng = np.random.default_rng(seed)
    few = np.zeros(D.n, dtype=np.int64)
    many = np.zeros(D.n, dtype=np.int64)
    per_sample = []
    done = 0
    while done < samples:
        k = min(batch, samples - done)
        coins = _coin_block(rng, k, pairing.num_coins)
        x = _kernels.batch_same_side_counts(D.indptr, D.indices, pairing.sides(coins))
        lo = x < t
        hi = x > dplus - t
        few += lo.sum(axis=0)
        many += hi.sum(axis=0)
        per_sample.append((lo | hi).sum(axis=1))
        done += k
    bad = np.concatenate(per_sample) if per_sample else np.zeros(0, dtype=np.int64)
    return BadEventCounts(samples, few, many, bad)


__all__ = [
    "BadEventCounts", "BadThreshold", "BadVertex", "Pairing", "SampleReport", "SplitFailure",
    "bad_vertices", "find_good_bisection", "monte_carlo_bad_events", "random_pairing",
    "sample_split",
]
