"""Weighted local lemma bookkeeping and a Moser-Tardos style resampling splitter."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .digraph import Bipartition, Digraph
from .pairing import (BadVertex, Pairing, SampleReport, SplitFailure, normalise_seed,
                      random_pairing)
from .probability import BadThreshold, as_epsilon, chernoff_min_degree

LN2 = math.log(2.0)


def admissible_max_indegree(eps, delta: int) -> float:
    """``exp(eps^2 (delta - 1)) / (8 delta)``; ``inf`` once the exponential overflows."""
    if delta < 1:
        raise ValueError("delta must be >= 1")
    e = float(as_epsilon(eps))
    try:
        return math.exp(e * e * (delta - 1)) / (8 * delta)
    except OverflowError:
        return math.inf


def _first_true(pred, lo: int) -> int:
    """Smallest ``x >= lo`` with ``pred(x)``, for a predicate that stays true once true."""
    if pred(lo):
        return lo
    step = 1
    hi = lo + step
    while not pred(hi):
        lo = hi
        step *= 2
        hi = lo + step
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def delta0_lll(eps) -> int:
    """Least ``delta >= 2`` with ``exp(-eps^2(delta-1)) < 1/4`` and ``exp(eps^2(delta-1))/(8 delta) >= delta``.

    Both conditions, once met, stay met above the turning point ``2/eps^2`` of
    the second one (it is negative before it), so a galloping search over that
    range returns the same integer as a scan from 2 upward.
    """
    e = float(as_epsilon(eps))
    e2 = e * e
    p_ok = _first_true(lambda d: e2 * (d - 1) > 2 * LN2, 2)
    turn = max(2, math.ceil(2 / e2))
    deg_ok = _first_true(lambda d: e2 * (d - 1) >= math.log(8) + 2 * math.log(d), turn)
    return max(p_ok, deg_ok)


@dataclass(frozen=True)
class LLLParams:
    """Weights and bounds attached to the bad events ``A(v)``."""

    epsilon: Fraction
    delta_plus: int
    max_indegree: int
    p: float
    log_p: float
    weights: tuple[Fraction, ...]
    dep_bound: np.ndarray
    thresholds: np.ndarray


def lll_params(D: Digraph, eps) -> LLLParams:
    e = as_epsilon(eps)
    delta = D.min_out_degree()
    if delta < 1:
        raise ValueError("weighted local lemma needs minimum out-degree >= 1")
    log_p = -float(e) ** 2 * (delta - 1)
    weights = tuple(Fraction(int(d), delta) for d in D.out_degrees)
    dep = 2 * D.out_degrees * D.max_in_degree()
    dep.flags.writeable = False
    return LLLParams(e, delta, D.max_in_degree(), math.exp(log_p), log_p, weights, dep,
                     BadThreshold.relative(e).thresholds(D.out_degrees))


@dataclass
class LLLReport:
    """Diagnostic report on the weighted local lemma conditions for ``D``.

    ``passes`` is the lemma's own test: ``p <= 1/4``, (a) and (b) at every
    vertex, plus the Chernoff validity range behind (a).  ``cond_a`` uses the
    one-sided bound ``exp(-eps^2 (d - 1)) <= p^{t_v}``; ``cond_a_two_sided``
    keeps the factor 2 of ``Pr(A(v)) < 2 exp(...)`` and is reported only.
    """

    params: LLLParams
    p_ok: bool
    chernoff_valid: bool
    cond_a: np.ndarray
    cond_a_two_sided: np.ndarray
    cond_b: np.ndarray
    admissible_indegree: float
    indegree_ok: bool
    delta0: int
    delta0_ok: bool
    notes: list[str] = field(default_factory=list)

    @property
    def passes(self) -> bool:
        return bool(self.p_ok and self.chernoff_valid and self.cond_a.all() and self.cond_b.all())

    @property
    def hypotheses_hold(self) -> bool:
        return self.delta0_ok and self.indegree_ok

    def to_json(self) -> dict:
        pr = self.params

        def first_bad(mask):
            idx = np.flatnonzero(~mask)
            return int(idx[0]) if len(idx) else None

        return {
            "epsilon": str(pr.epsilon),
            "delta_plus": pr.delta_plus,
            "max_indegree": pr.max_indegree,
            "p": pr.p,
            "log_p": pr.log_p,
            "p_le_quarter": self.p_ok,
            "chernoff_valid": self.chernoff_valid,
            "cond_a": bool(self.cond_a.all()),
            "cond_a_first_violation": first_bad(self.cond_a),
            "cond_a_two_sided": bool(self.cond_a_two_sided.all()),
            "cond_b": bool(self.cond_b.all()),
            "cond_b_first_violation": first_bad(self.cond_b),
            "admissible_max_indegree": self.admissible_indegree,
            "indegree_ok": self.indegree_ok,
            "delta0": self.delta0,
            "delta0_ok": self.delta0_ok,
            "passes": self.passes,
            "notes": self.notes,
        }


def check_weighted_lll(D: Digraph, eps) -> LLLReport:
    pr = lll_params(D, eps)
    e2 = pr.epsilon ** 2
    delta = pr.delta_plus
    d = D.out_degrees
    # (a): exp(-e2 (d-1)) <= p^{d/delta}  <=>  e2 (d - 1) >= e2 (delta - 1) d / delta
    cond_a = np.array([e2 * (int(x) - 1) >= e2 * (delta - 1) * Fraction(int(x), delta)
                       for x in d], dtype=bool)
    # two-sided: ln 2 <= e2 (d/delta - 1)
    slack = np.array([float(e2 * (Fraction(int(x), delta) - 1)) for x in d])
    cond_a_two = slack >= LN2
    # (b): 2p * dep <= t_v / 2, in logs; (2p)^{t_w} <= 2p because t_w >= 1 and 2p <= 1
    with np.errstate(divide="ignore"):
        lhs = LN2 + pr.log_p + np.log(pr.dep_bound.astype(float))
    rhs = np.log(d.astype(float) / delta / 2)
    cond_b = (pr.dep_bound == 0) | (lhs <= rhs)
    adm = admissible_max_indegree(pr.epsilon, delta)
    d0 = delta0_lll(pr.epsilon)
    notes = []
    chern = delta >= chernoff_min_degree(pr.epsilon)
    if not chern:
        notes.append("minimum out-degree below (2+sqrt2)/eps: tail bound in (a) not established")
    if pr.max_indegree > adm:
        notes.append("max in-degree exceeds the admissible bound: (b) not guaranteed")
    return LLLReport(pr, pr.p <= 0.25, chern, cond_a, cond_a_two, cond_b, adm,
                     pr.max_indegree <= adm, d0, delta >= d0, notes)


def _coin_members(pairing: Pairing) -> np.ndarray:
    """``(num_coins, 2)`` array of the vertices each coin places; -1 pads the singleton row."""
    u, w = pairing.arrays()
    rows = np.column_stack([u, w]) if len(u) else np.empty((0, 2), dtype=np.int64)
    if pairing.singleton is not None:
        rows = np.vstack([rows, [[pairing.singleton, -1]]])
    return rows.astype(np.int64)


def event_variables(D: Digraph, pairing: Pairing, v: int) -> np.ndarray:
    """Coins behind ``A(v)``: every pair meeting N+(v), plus v's own pair."""
    ids = pairing.pair_ids(D.n)
    return np.unique(np.concatenate([ids[D.out_neighbors(v)], [ids[v]]]))


def dependency_set(D: Digraph, pairing: Pairing, v: int) -> set[int]:
    """Vertices ``u != v`` whose event shares a coin with ``A(v)``."""
    members = _coin_members(pairing)[event_variables(D, pairing, v)].ravel()
    members = members[members >= 0]
    out = set(members.tolist())
    for m in members.tolist():
        out.update(D.in_neighbors(m).tolist())
    out.discard(v)
    return out


def nominal_dependency_bound(D: Digraph, v: int) -> int:
    return 2 * D.out_degree(v) * D.max_in_degree()


def safe_dependency_bound(D: Digraph, v: int) -> int:
    """Bound that always holds: each of the ``<= d+(v)+1`` coins reaches ``<= 2 + 2 Delta^-`` events."""
    return (D.out_degree(v) + 1) * (2 * D.max_in_degree() + 2) - 1


def moser_tardos_split(D: Digraph, eps, seed=0, max_resamples: int = 10 ** 6,
                       pairing: Pairing | None = None):
    """Fix a pairing, then resample the coins of the lowest bad vertex until none is bad.

    Returns a :class:`SampleReport` whose stats carry ``resamples`` and the
    resampled-vertex ``trace``, or a :class:`SplitFailure` after
    ``max_resamples`` resamplings.
    """
    seed = normalise_seed(seed)
    rng = np.random.default_rng(seed)
    if pairing is None:
        pairing = random_pairing(D.n, rng)
    pairing.check(D.n)
    spec = BadThreshold.relative(eps)
    t = spec.thresholds(D.out_degrees)
    dplus = D.out_degrees
    coins = rng.integers(0, 2, size=pairing.num_coins, dtype=np.uint8)
    side = pairing.sides(coins).copy()
    x = _kernels.same_side_counts(D.indptr, D.indices, side)
    bad = (x < t) | (x > dplus - t)
    ids = pairing.pair_ids(D.n)
    members = _coin_members(pairing)
    trace: list[int] = []
    while bad.any():
        if len(trace) >= max_resamples:
            bad_list = [BadVertex(int(v), int(x[v]), int(t[v])) for v in np.flatnonzero(bad)]
            best = SampleReport(Bipartition.from_side(side), bad_list, 1, seed)
            return SplitFailure(f"still {len(bad_list)} bad vertices after {max_resamples} "
                                "resamples", 1, seed, best,
                                {"resamples": len(trace), "history_length": len(trace)})
        v = int(np.argmax(bad))
        trace.append(v)
        var = np.unique(np.concatenate([ids[D.out_neighbors(v)], [ids[v]]]))
        new = rng.integers(0, 2, size=len(var), dtype=np.uint8)
        changed = var[new != coins[var]]
        coins[var] = new
        if len(changed) == 0:
            continue
        moved = members[changed].ravel()
        moved = moved[moved >= 0]
        side[moved] ^= 1
        nbrs = [D.in_indices[D.in_indptr[m]:D.in_indptr[m + 1]] for m in moved]
        affected = np.unique(np.concatenate([moved] + nbrs))
        _kernels.recount(D.indptr, D.indices, side, x, affected)
        bad[affected] = (x[affected] < t[affected]) | (x[affected] > dplus[affected] - t[affected])
    stats = {"resamples": len(trace), "trace": trace, "spec": spec.describe(),
             "pairing": pairing.to_json()}
    return SampleReport(Bipartition.from_side(side), [], 1, seed, stats)
