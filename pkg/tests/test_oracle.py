import numpy as np
import pytest

from localmotifs.motif_index import build_table
from localmotifs.oracle import OracleCapError, brute_force_count

from conftest import clique, graph_from_edges, path, random_graph


def test_triangle():
    res = brute_force_count(clique(3), 3)
    assert res.counts.column(7).tolist() == [1, 1, 1]
    assert res.subsets_examined == 1


def test_four_path():
    res = brute_force_count(path(4), 4)
    assert res.counts.counts.sum(axis=1).tolist() == [1, 1, 1, 1]
    assert np.count_nonzero(res.counts.counts.sum(axis=0)) == 1


def test_two_disjoint_edges():
    res = brute_force_count(graph_from_edges([(0, 1), (2, 3)], False, 4), 3)
    assert not res.counts.counts.any()
    assert res.subsets_examined == 4


def test_cap():
    with pytest.raises(OracleCapError) as err:
        brute_force_count(path(81), 4)
    assert err.value.cap == 80
    with pytest.raises(OracleCapError):
        brute_force_count(path(10), 3, cap=5)


def test_table_mismatch():
    with pytest.raises(ValueError):
        brute_force_count(path(4), 3, build_table(3, True))


@pytest.mark.parametrize("seed", range(5))
def test_triangles_by_adjacency_walk(seed):
    g = random_graph(15, 0.4, False, seed)
    a = np.zeros((15, 15), dtype=np.int64)
    for u, v in g.to_edges():
        a[u, v] = a[v, u] = 1
    per_vertex = np.diag(a @ a @ a) // 2
    assert brute_force_count(g, 3).counts.column(7).tolist() == per_vertex.tolist()
