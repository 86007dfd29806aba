"""Brute-force reference counts: every k-subset, checked one by one.

Deliberately shares nothing with the BFS enumerator except ``encode`` and
the index table.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

from .enumerator import CountMatrix
from .graph import CsrGraph
from .motif_index import MotifIndexTable, build_table, check_k, encode

ORACLE_CAPS = {3: 200, 4: 80}


class OracleCapError(ValueError):
    def __init__(self, n, k, cap):
        self.cap = cap
        super().__init__(f"brute force with k={k} is capped at {cap} vertices, graph has {n}")


@dataclass
class OracleResult:
    counts: CountMatrix
    subsets_examined: int


def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


def _connected(subset, und_adj) -> bool:
    parent = {v: v for v in subset}
    for a, b in combinations(subset, 2):
        if b in und_adj[a]:
            ra, rb = _find(parent, a), _find(parent, b)
            if ra != rb:
                parent[ra] = rb
    root = _find(parent, subset[0])
    return all(_find(parent, v) == root for v in subset[1:])


def brute_force_count(g: CsrGraph, k: int, table: Optional[MotifIndexTable] = None,
                      cap: Optional[int] = None) -> OracleResult:
    check_k(k)
    table = table or build_table(k, g.directed)
    if (table.k, table.directed) != (k, g.directed):
        raise ValueError(f"table space {table.space} does not match k={k}, directed={g.directed}")
    n = g.num_vertices
    cap = ORACLE_CAPS[k] if cap is None else cap
    if n > cap:
        raise OracleCapError(n, k, cap)

    und_adj = [set() for _ in range(n)]
    for a, b in g.to_edges():
        und_adj[a].add(int(b))
        und_adj[b].add(int(a))

    counts = np.zeros((n, table.num_classes), dtype=np.int64)
    col_of_class = {int(c): j for j, c in enumerate(table.class_list)}
    examined = 0
    for subset in combinations(range(n), k):
        examined += 1
        if not _connected(subset, und_adj):
            continue
        canon = int(table.canonical_of_raw[encode(subset, g).raw])
        j = col_of_class[canon]
        for v in subset:
            counts[v, j] += 1
    assert examined == comb(n, k)
    m = CountMatrix(counts, k, g.directed, table.class_list.astype(np.int64), "canonical")
    return OracleResult(m, examined)
