"""Degree-constrained bipartitions and bisections of tournaments and digraphs."""

from ._kernels import BACKEND
from .digraph import (Bipartition, Digraph, DigraphError, VertexError, is_k_partite_tournament,
                      is_strongly_connected, is_tournament, strongly_connected_components)
from .edgelist import read_edge_list, write_edge_list
from .generators import (random_digraph_min_outdegree, random_k_partite_tournament,
                         random_tournament, rotational_tournament)
from .lll import admissible_max_indegree, check_weighted_lll, moser_tardos_split
from .pairing import (Pairing, SampleReport, SplitFailure, bad_vertices, find_good_bisection,
                      random_pairing, sample_split)
from .peeling import (SplitSpec, is_s_minimal, lemma2_bound, max_core, minimal_core,
                      split_multipartite, strong_split)
from .probability import (BadThreshold, PairProfile, Partner, binomial_tail, chernoff_cap,
                          delta0_theorem1, expected_bad_exact, expected_bad_upper, monotone_f,
                          prob_too_few, prob_too_many)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BadThreshold", "Bipartition", "Digraph", "DigraphError", "PairProfile",
    "Pairing", "Partner", "SampleReport", "SplitFailure", "SplitSpec", "VertexError",
    "admissible_max_indegree", "bad_vertices", "binomial_tail", "check_weighted_lll",
    "chernoff_cap", "delta0_theorem1", "expected_bad_exact", "expected_bad_upper",
    "find_good_bisection", "is_k_partite_tournament", "is_s_minimal", "is_strongly_connected",
    "is_tournament", "lemma2_bound", "max_core", "minimal_core", "monotone_f",
    "moser_tardos_split", "prob_too_few", "prob_too_many", "random_digraph_min_outdegree",
    "random_k_partite_tournament", "random_pairing", "random_tournament", "read_edge_list",
    "rotational_tournament", "sample_split", "split_multipartite", "strong_split",
    "strongly_connected_components", "write_edge_list",
]
