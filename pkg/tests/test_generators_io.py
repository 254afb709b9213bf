import pytest
from hypothesis import given, strategies as st

from digsplit.digraph import DigraphError, is_k_partite_tournament, is_tournament
from digsplit.edgelist import EdgeListError, canonical, read_edge_list, to_dot, write_edge_list
from digsplit.generators import (FAMILIES, disjoint_union, make_family, random_digraph_min_outdegree,
                                 random_k_partite_tournament, random_tournament,
                                 rotational_tournament)

# frozen outputs; PCG64 streams are stable across platforms and numpy versions
TOURNAMENT_5_SEED_0 = "5 10\n0 4\n1 0\n1 2\n1 3\n1 4\n2 0\n2 3\n2 4\n3 0\n4 3\n"
MINOUT_6_2_SEED_1 = "6 12\n0 2\n0 3\n1 0\n1 4\n2 4\n2 5\n3 1\n3 5\n4 1\n4 5\n5 1\n5 3\n"
BIPARTITE_2_3_SEED_7 = "5 6\n2 0\n2 1\n3 0\n3 1\n4 0\n4 1\npart 0: 0 1\npart 1: 2 3 4\n"


def test_frozen_instances():
    assert write_edge_list(random_tournament(5, seed=0)) == TOURNAMENT_5_SEED_0
    assert write_edge_list(random_digraph_min_outdegree(6, 2, seed=1)) == MINOUT_6_2_SEED_1
    assert write_edge_list(random_k_partite_tournament((2, 3), seed=7)) == BIPARTITE_2_3_SEED_7


def test_rotational_is_regular():
    D = rotational_tournament(9)
    assert is_tournament(D)
    assert set(D.out_degrees.tolist()) == {4} and set(D.in_degrees.tolist()) == {4}
    with pytest.raises(DigraphError):
        rotational_tournament(8)


@given(st.integers(2, 20), st.integers(0, 2 ** 32))
def test_minout_exact_degree(n, seed):
    d = min(3, n - 1)
    D = random_digraph_min_outdegree(n, d, seed=seed)
    assert (D.out_degrees == d).all()


@given(st.lists(st.integers(1, 5), min_size=2, max_size=4), st.integers(0, 1000))
def test_kpartite_is_kpartite(sizes, seed):
    T = random_k_partite_tournament(sizes, seed=seed)
    assert is_k_partite_tournament(T, len(sizes))
    assert T == random_k_partite_tournament(sizes, seed=seed)


def test_disjoint_union():
    U = disjoint_union(rotational_tournament(3), rotational_tournament(5))
    assert U.n == 8 and U.num_arcs == 3 + 10
    assert U.has_arc(3, 4) and not U.has_arc(0, 3)


def test_make_family():
    assert set(FAMILIES) >= {"tournament", "rotational", "kpartite", "minout"}
    assert make_family("tournament", n=6, seed=2) == random_tournament(6, seed=2)
    with pytest.raises((ValueError, KeyError)):
        make_family("nonsense", n=3)


@given(st.integers(1, 12), st.integers(0, 500))
def test_roundtrip(n, seed):
    D = random_tournament(n, seed=seed)
    text = write_edge_list(D)
    assert read_edge_list(text) == D
    assert canonical(text) == text


def test_roundtrip_parts():
    T = random_k_partite_tournament((2, 2, 3), seed=4)
    assert read_edge_list(write_edge_list(T)).parts == T.parts


def test_comments_and_order():
    text = "# a comment\n3 2\n\n2 0\n0 1\n"
    assert canonical(text) == "3 2\n0 1\n2 0\n"


@pytest.mark.parametrize("text, msg", [
    ("", "empty"),
    ("3\n", "line 1: malformed header"),
    ("3 1\n0 3\n", "line 2: vertex out of range"),
    ("3 1\n1 1\n", "line 2: loop"),
    ("3 2\n0 1\n0 1\n", "duplicate arc 0 1"),
    ("3 2\n0 1\n", "announces 2 arcs, found 1"),
    ("3 1\n0 x\n", "line 2: malformed arc"),
    ("2 1\n0 1\npart 0: 0 1\n", "inside part"),
])
def test_read_errors(text, msg):
    with pytest.raises(EdgeListError, match=msg):
        read_edge_list(text)


def test_dot():
    assert "0 -> 1;" in to_dot(rotational_tournament(3))
