"""Exact per-vertex counts of connected 3- and 4-vertex motifs."""

from .enumerator import (CensusError, CountMatrix, count_motifs, merge_isomorphs,
                         total_motif_census)
from .graph import (CsrGraph, EdgeList, GraphInputError, VertexOrdering, build_csr,
                    degree_order, load_edge_list, relabel, undirected_view)
from .motif_index import MotifIndex, MotifIndexTable, build_table, encode, n_max
from .oracle import OracleResult, brute_force_count
from .parallel import WorkPlan, count_local_motifs, parallel_count, plan_work
from .random_theory import (ComparisonReport, ExpectedProfile, GnpParams, compare_to_theory,
                            expected_count, expected_profile, generate_gnp)

__version__ = "0.1.0"
