"""Exact bad-vertex probabilities under a random pair split, and the bounds on them.

Setting: the vertices are paired up (one singleton if ``n`` is odd) and each
pair is split across the two sides by a fair coin.  For a vertex ``v`` let
``X_v`` be the number of its out-neighbours on its own side.  ``v`` is *bad*
for a threshold ``t`` when ``X_v < t`` or ``X_v > d+(v) - t``.

Everything with a closed binomial form is returned as a :class:`Fraction`;
only the exponential bounds are floats.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

SQRT2 = math.sqrt(2.0)
LN2 = math.log(2.0)


class BoundNotValid(ValueError):
    """An analytic bound was requested outside the range where it holds."""


class Partner(str, enum.Enum):
    """Where ``v``'s pair partner sits relative to ``v``."""

    PLUS = "plus"  # partner is an out-neighbour
    MINUS = "minus"  # partner is not an out-neighbour
    SINGLETON = "singleton"  # v is the unpaired vertex


def as_epsilon(eps) -> Fraction:
    """Read ``eps`` as an exact fraction (floats by their shortest decimal repr)."""
    if isinstance(eps, float):
        e = Fraction(repr(eps))
    else:
        e = Fraction(eps)
    if not 0 < e < Fraction(1, 2):
        raise ValueError(f"epsilon must lie in (0, 1/2), got {eps}")
    return e


def relative_threshold(dplus: int, eps) -> int:
    """``ceil((1/2 - eps) * dplus)`` in exact arithmetic."""
    e = as_epsilon(eps)
    return math.ceil((Fraction(1, 2) - e) * dplus)


@dataclass(frozen=True)
class BadThreshold:
    """Either a relative target ``(1/2 - epsilon) d+(v)`` or an absolute target ``k``."""

    epsilon: Fraction | None = None
    k: int | None = None

    def __post_init__(self):
        if (self.epsilon is None) == (self.k is None):
            raise ValueError("give exactly one of epsilon or k")
        if self.epsilon is not None:
            object.__setattr__(self, "epsilon", as_epsilon(self.epsilon))
        elif self.k < 0:
            raise ValueError("absolute threshold k must be >= 0")

    @classmethod
    def relative(cls, eps) -> BadThreshold:
        return cls(epsilon=eps)

    @classmethod
    def absolute(cls, k: int) -> BadThreshold:
        return cls(k=int(k))

    def threshold(self, dplus: int) -> int:
        if self.k is not None:
            return self.k
        return math.ceil((Fraction(1, 2) - self.epsilon) * dplus)

    def thresholds(self, dplus: np.ndarray) -> np.ndarray:
        dplus = np.asarray(dplus, dtype=np.int64)
        if self.k is not None:
            return np.full(len(dplus), self.k, dtype=np.int64)
        num = self.epsilon.denominator - 2 * self.epsilon.numerator
        den = 2 * self.epsilon.denominator
        return -((-num * dplus) // den)

    def describe(self) -> dict:
        if self.k is not None:
            return {"k": self.k}
        return {"epsilon": str(self.epsilon)}


def as_threshold(spec) -> BadThreshold:
    return spec if isinstance(spec, BadThreshold) else BadThreshold.relative(spec)


@dataclass(frozen=True)
class PairProfile:
    """Counts that fix the law of ``X_v`` under a given pairing.

    ``a``: pairs lying entirely inside N+(v); ``b``: pairs (or the singleton)
    meeting N+(v) in exactly one vertex.  ``X_v = a + Binomial(b - 1, 1/2)``
    when the partner is an out-neighbour, ``a + Binomial(b, 1/2)`` otherwise.
    """

    a: int
    b: int
    partner: Partner
    dplus: int

    def __post_init__(self):
        object.__setattr__(self, "partner", Partner(self.partner))
        if self.a < 0 or self.b < 0:
            raise ValueError("a and b must be non-negative")
        if self.dplus != 2 * self.a + self.b:
            raise ValueError(f"dplus={self.dplus} but 2a+b={2 * self.a + self.b}")
        if self.partner is Partner.PLUS and self.b < 1:
            raise ValueError("partner in N+(v) needs b >= 1")

    @property
    def free_flips(self) -> int:
        return self.b - 1 if self.partner is Partner.PLUS else self.b


def profile_of(D, v: int, pairing) -> PairProfile:
    """Profile of ``v`` for a pairing (anything with ``pairs`` and ``singleton``)."""
    pair_id = pairing.pair_ids(D.n)
    nbrs = D.out_neighbors(v)
    _, counts = np.unique(pair_id[nbrs], return_counts=True)
    a = int((counts == 2).sum())
    b = int((counts == 1).sum())
    partner = pairing.partner(v)
    if partner is None:
        rel = Partner.SINGLETON
    elif D.has_arc(v, partner):
        rel = Partner.PLUS
    else:
        rel = Partner.MINUS
    return PairProfile(a, b, rel, int(D.out_degrees[v]))


def all_profiles(D, pairing) -> list[PairProfile]:
    pair_id = pairing.pair_ids(D.n)
    partner = pairing.partner_array(D.n)
    out = []
    for v in range(D.n):
        nbrs = D.out_neighbors(v)
        _, counts = np.unique(pair_id[nbrs], return_counts=True)
        p = int(partner[v])
        if p < 0:
            rel = Partner.SINGLETON
        elif D.has_arc(v, p):
            rel = Partner.PLUS
        else:
            rel = Partner.MINUS
        out.append(PairProfile(int((counts == 2).sum()), int((counts == 1).sum()), rel,
                               int(D.out_degrees[v])))
    return out


@lru_cache(maxsize=65536)
def binomial_tail(N: int, k: int) -> Fraction:
    """``P(Binomial(N, 1/2) <= k)`` exactly."""
    if N < 0:
        raise ValueError("N must be non-negative")
    if k < 0:
        return Fraction(0)
    if k >= N:
        return Fraction(1)
    total = 0
    c = 1
    for i in range(k + 1):
        total += c
        c = c * (N - i) // (i + 1)
    return Fraction(total, 1 << N)


def prob_too_few(profile: PairProfile, t: int) -> Fraction:
    """``P(X_v < t)``."""
    if profile.a >= t:
        return Fraction(0)
    return binomial_tail(profile.free_flips, t - 1 - profile.a)


def prob_too_many(profile: PairProfile, t: int) -> Fraction:
    """``P(X_v > d+(v) - t)``."""
    if profile.a >= t:
        return Fraction(0)
    if profile.partner is Partner.PLUS:
        return binomial_tail(profile.b - 1, t - 2 - profile.a)
    return binomial_tail(profile.b, t - 1 - profile.a)


def prob_bad(profile: PairProfile, t: int) -> Fraction:
    """``P(X_v < t or X_v > d+(v) - t)``, correct also when the two events overlap."""
    d = profile.dplus
    if 2 * t < d + 2:
        return prob_too_few(profile, t) + prob_too_many(profile, t)
    m = profile.free_flips
    lo, hi = t - profile.a, d - t - profile.a
    if hi < lo:
        return Fraction(1)
    good = binomial_tail(m, hi) - binomial_tail(m, lo - 1)
    return 1 - good


def monotone_f(a: int, b: int, t: int) -> Fraction:
    """``sum_{i=0}^{t-1-a} C(b-1, i) 2^-(b-1)``, the envelope that dominates both tails."""
    if a >= t:
        raise ValueError(f"need a < t, got a={a}, t={t}")
    if b < 1:
        raise ValueError("need b >= 1")
    return binomial_tail(b - 1, t - 1 - a)


def chernoff_min_degree(eps) -> float:
    """Smallest out-degree at which :func:`chernoff_cap` applies, ``(2 + sqrt 2) / eps``."""
    return (2 + SQRT2) / float(as_epsilon(eps))


def chernoff_cap(dplus: int, eps) -> float:
    """``exp(-eps^2 (d+ - 1))``, bounding each one-sided bad probability.

    Raises :class:`BoundNotValid` below ``(2 + sqrt 2) / eps``.
    """
    e = float(as_epsilon(eps))
    if dplus < chernoff_min_degree(eps):
        raise BoundNotValid(
            f"out-degree {dplus} below (2+sqrt2)/eps = {chernoff_min_degree(eps):.4f}")
    return math.exp(-e * e * (dplus - 1))


def hoeffding_tail(N: int, k: int) -> float:
    """``exp(-2N (1/2 - k/N)^2)``, an upper bound for ``P(Bin(N,1/2) <= k)`` when ``k < N/2``."""
    return math.exp(-2 * N * (0.5 - k / N) ** 2)


def expected_bad_upper(D, eps) -> float:
    """``sum_v 2 exp(-eps^2 (d+(v) - 1))``; needs every out-degree in the Chernoff range."""
    e = float(as_epsilon(eps))
    if D.n == 0:
        return 0.0
    if D.min_out_degree() < chernoff_min_degree(eps):
        raise BoundNotValid(
            f"minimum out-degree {D.min_out_degree()} below "
            f"(2+sqrt2)/eps = {chernoff_min_degree(eps):.4f}")
    return math.fsum(2 * math.exp(-e * e * (int(d) - 1)) for d in D.out_degrees)


def expected_bad_exact(D, pairing, spec) -> Fraction:
    """Exact expected number of bad vertices for one fixed pairing."""
    spec = as_threshold(spec)
    total = Fraction(0)
    for prof in all_profiles(D, pairing):
        total += prob_bad(prof, spec.threshold(prof.dplus))
    return total


def _dyadic_holds(e2: float, i: int) -> bool:
    # exp(-e2 (2^{i-1} - 1)) <= 2^{-2i-2}, in logs
    return e2 * (2 ** (i - 1) - 1) >= (2 * i + 2) * LN2


def i0_dyadic(eps) -> int:
    """Least ``i`` from which ``exp(-eps^2 (2^{i-1} - 1)) <= 2^{-2i-2}`` holds for good.

    The gap between the two sides is convex in ``i`` and negative at ``i = 1``,
    so the first index where it holds is permanent (past the minimum the gap
    grows doubly exponentially).  The next index is re-checked anyway.
    """
    e = float(as_epsilon(eps))
    e2 = e * e
    i = 1
    while not _dyadic_holds(e2, i):
        i += 1
    assert _dyadic_holds(e2, i + 1)
    return i


def delta0_theorem1(eps) -> int:
    """``max(2^(i0-1), ceil((2 + sqrt 2)/eps))``."""
    i0 = i0_dyadic(eps)
    return max(2 ** (i0 - 1), math.ceil(chernoff_min_degree(eps)))


def dyadic_expected_bound(eps, i0: int | None = None, terms: int = 64) -> float:
    """Partial sum of ``2^{i+2} exp(-eps^2 (2^{i-1}-1))`` over ``i >= i0``."""
    e = float(as_epsilon(eps))
    i0 = i0_dyadic(eps) if i0 is None else i0
    return math.fsum(2 ** (i + 2) * math.exp(-e * e * (2 ** (i - 1) - 1))
                     for i in range(i0, i0 + terms))
