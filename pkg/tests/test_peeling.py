import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from digsplit.digraph import Bipartition, Digraph, DigraphError, induced_min_out_degree
from digsplit.generators import (directed_cycle, disjoint_union, random_digraph_min_outdegree,
                                 random_k_partite_tournament, random_tournament,
                                 rotational_tournament, transitive_tournament)
from digsplit.pairing import find_good_bisection
from digsplit.peeling import (CoreError, HypothesisError, HypothesisWarning, SplitSpec,
                              SplitVerificationError, is_minimal_core, is_s_minimal, lemma2_bound,
                              max_minimal_vertices, max_core, minimal_core, peel_split,
                              split_min_degree, split_multipartite, strong_split,
                              tight_in_neighbours)
from digsplit.probability import BadThreshold


def _ok(D, S, s):
    return bool(S) and induced_min_out_degree(D, S) >= s


def _brute_max_core(D, S, s):
    best = frozenset()
    for r in range(len(S), 0, -1):
        for sub in itertools.combinations(sorted(S), r):
            if _ok(D, sub, s):
                best |= frozenset(sub)
    return best


def _restart_minimal(D, S, s):
    """Literal procedure: drop the first removable vertex, restart from the top."""
    A = frozenset(S)
    while True:
        for v in sorted(A):
            rest = _brute_max_core(D, A - {v}, s)
            if rest:
                A = rest
                break
        else:
            return A


small = st.integers(3, 9).flatmap(lambda n: st.builds(
    lambda d, seed: random_digraph_min_outdegree(n, d, seed=seed),
    st.integers(1, min(3, n - 1)), st.integers(0, 10 ** 6)))


@given(small, st.integers(1, 3))
def test_max_core_matches_brute_force(D, s):
    assert max_core(D, range(D.n), s) == _brute_max_core(D, range(D.n), s)


@given(small, st.integers(1, 2))
def test_minimal_core_is_minimal_and_tight(D, s):
    if not max_core(D, range(D.n), s):
        return
    core = max_core(D, range(D.n), s)
    A = minimal_core(D, core, s)
    assert is_minimal_core(D, A, s)
    assert not any(_ok(D, sub, s) for r in range(1, len(A))
                   for sub in itertools.combinations(sorted(A), r))
    # every vertex of a minimal core has a tight in-neighbour inside it
    assert all(u is not None for u in tight_in_neighbours(D, A, s).values())


@given(small, st.integers(1, 2))
def test_single_pass_equals_restart_scan(D, s):
    core = max_core(D, range(D.n), s)
    if core:
        assert minimal_core(D, core, s) == _restart_minimal(D, core, s)


def test_core_errors():
    with pytest.raises(CoreError):
        minimal_core(directed_cycle(3), [], 1)
    with pytest.raises(CoreError):
        minimal_core(transitive_tournament(4), range(4), 1)


def test_per_vertex_threshold():
    D = rotational_tournament(7)
    assert max_core(D, range(7), [3] * 7) == frozenset(range(7))
    # 0 cannot reach 4 and peels; everyone else keeps an out-neighbour
    assert max_core(D, range(7), lambda v: 4 if v == 0 else 1) == frozenset(range(1, 7))
    assert max_core(D, range(7), lambda v: 4 if v < 2 else 3) == frozenset()


def _brute_s_minimal(D, s):
    arcs = sorted(D.arcs)
    if D.min_out_degree() < s:
        return False
    for r in range(len(arcs) + 1):
        for keep in itertools.combinations(arcs, r):
            for k in range(1, D.n + 1):
                for verts in itertools.combinations(range(D.n), k):
                    vs = set(verts)
                    sub = [(u, v) for u, v in keep if u in vs and v in vs]
                    if (len(sub), len(vs)) == (len(arcs), D.n):
                        continue
                    H = Digraph(D.n, sub)
                    if all(H.out_degree(v) >= s for v in vs):
                        return False
    return True


@pytest.mark.parametrize("D, s", [
    (directed_cycle(3), 1), (directed_cycle(4), 1),
    (disjoint_union(directed_cycle(2), directed_cycle(2)), 1),
    (rotational_tournament(5), 2), (Digraph(3, [(0, 1), (1, 0), (1, 2), (2, 0)]), 1),
])
def test_s_minimal_against_definition(D, s):
    assert is_s_minimal(D, s) == _brute_s_minimal(D, s)


def test_size_bound_values():
    assert lemma2_bound(1, 2) == 4
    assert lemma2_bound(2, 2) == Fraction(81, 8)
    assert lemma2_bound(1, 3) == 12
    assert lemma2_bound(3, 4) == 96
    assert max_minimal_vertices(2, 2) == 10 and max_minimal_vertices(1, 3) == 11
    assert split_min_degree(2, 3, 2) == Fraction(89, 8)
    assert split_min_degree(1, 1, 3) == 13


def test_split_multipartite_bipartite():
    T = random_k_partite_tournament((60, 60), seed=3)
    res = split_multipartite(T, SplitSpec(2, 3))
    assert res.success and res.hypothesis_met
    A, B = res.bipartition.A, res.bipartition.B
    assert induced_min_out_degree(T, A) >= 2 and induced_min_out_degree(T, B) >= 3
    assert len(A) <= max_minimal_vertices(2, 2)


def test_split_multipartite_below_hypothesis():
    T = random_k_partite_tournament((6, 6), seed=0)
    with pytest.raises(HypothesisError):
        split_multipartite(T, SplitSpec(1, 1), strict=True)
    with pytest.warns(HypothesisWarning):
        split_multipartite(T, SplitSpec(1, 1))


def test_split_multipartite_rejects_general_digraphs():
    with pytest.raises(DigraphError):
        split_multipartite(directed_cycle(5), SplitSpec(1, 1), strict=False)


def test_peel_split_failure_names_the_vertex():
    D = disjoint_union(directed_cycle(3), transitive_tournament(3))
    res = peel_split(D, 1, 1)
    assert not res.success  # the transitive part has a sink
    res = peel_split(disjoint_union(directed_cycle(3), directed_cycle(3)), 1, 1)
    assert res.success and res.bipartition.A == {3, 4, 5}


def test_strong_split_checks_input():
    T = rotational_tournament(101)
    good = find_good_bisection(T, BadThreshold.relative(0.2), seed=0)
    res = strong_split(T, good.bipartition, 0.2)
    assert res.bipartition.A <= good.bipartition.A
    bogus = Bipartition.for_digraph(T, range(50))
    with pytest.raises(SplitVerificationError):
        strong_split(T, bogus, 0.2)


def test_spec_validation():
    with pytest.raises(ValueError):
        SplitSpec(3, 2)
    with pytest.raises(ValueError):
        SplitSpec(0, 1)


def test_random_tournament_cores_are_strong():
    from digsplit.digraph import is_strongly_connected

    for seed in range(20):
        T = random_tournament(12, seed=seed)
        if T.min_out_degree() >= 1:
            A = minimal_core(T, range(12), 1)
            assert is_strongly_connected(T.induced_subdigraph(A))
