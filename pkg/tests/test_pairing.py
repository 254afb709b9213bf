import numpy as np
import pytest
from hypothesis import given, strategies as st

from digsplit.digraph import Bipartition, side_degrees
from digsplit.generators import directed_cycle, random_tournament, rotational_tournament
from digsplit.pairing import (Pairing, bad_vertices, find_good_bisection, monte_carlo_bad_events,
                              random_pairing, sample_split)
from digsplit.probability import BadThreshold, expected_bad_exact


def test_pairing_validation():
    with pytest.raises(ValueError):
        Pairing(((0, 1), (1, 2)), None)
    with pytest.raises(ValueError):
        Pairing(((0, 0),), None)
    p = Pairing(((0, 3), (1, 2)), 4)
    assert p.n == 5 and p.num_coins == 3
    assert p.partner(0) == 3 and p.partner(4) is None
    assert p.pair_ids(5).tolist() == [0, 1, 1, 0, 2]
    with pytest.raises(ValueError):
        p.check(6)


def test_sides_follow_coins():
    p = Pairing(((0, 3), (1, 2)), 4)
    assert p.sides([0, 1, 1]).tolist() == [0, 1, 0, 1, 1]
    many = p.sides(np.array([[0, 0, 0], [1, 1, 1]], dtype=np.uint8))
    assert many.tolist() == [[0, 0, 1, 1, 0], [1, 1, 0, 0, 1]]


def test_json_roundtrip():
    p = random_pairing(9, seed=3)
    assert Pairing.from_json(p.to_json()) == p


@given(st.integers(1, 60), st.integers(0, 10 ** 6))
def test_random_pairing_is_perfect(n, seed):
    p = random_pairing(n, seed=seed)
    p.check(n)
    assert (p.singleton is None) == (n % 2 == 0)
    part = sample_split(p, seed=seed)
    assert part.is_bisection and len(part.A) + len(part.B) == n


def test_bad_vertices_definition():
    D = rotational_tournament(7)
    part = Bipartition.for_digraph(D, [0, 1, 2])
    spec = BadThreshold.absolute(1)
    a, b = side_degrees(D, part)
    want = [v for v in range(7) if min(a[v], b[v]) < 1]
    assert [bv.vertex for bv in bad_vertices(D, part, spec)] == want


def test_find_good_bisection_reproducible_and_parallel_safe():
    D = rotational_tournament(301)
    spec = BadThreshold.relative(0.25)
    r1 = find_good_bisection(D, spec, seed=11)
    r2 = find_good_bisection(D, spec, seed=11, jobs=4)
    assert r1.success and r1.bipartition == r2.bipartition
    assert r1.trials_used == r2.trials_used
    assert not bad_vertices(D, r1.bipartition, spec)


def test_find_good_bisection_failure_is_structured():
    res = find_good_bisection(directed_cycle(3), BadThreshold.relative(0.4), max_trials=3, seed=0)
    assert not res.success
    assert res.trials_used == 3 and res.stats["bad_history"] == [3, 3, 3]
    assert res.best is not None and len(res.best.bad) == 3


def test_monte_carlo_mean_tracks_exact():
    D = random_tournament(30, seed=9)
    p = random_pairing(30, seed=10)
    spec = BadThreshold.relative(0.2)
    mc = monte_carlo_bad_events(D, p, spec, 20000, seed=1)
    exact = float(expected_bad_exact(D, p, spec))
    assert abs(mc.mean_bad - exact) <= 4 * mc.stderr_bad
    again = monte_carlo_bad_events(D, p, spec, 20000, seed=1, batch=777)
    assert (again.too_few == mc.too_few).all()
