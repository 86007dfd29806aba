"""Adjacency-bit motif indices and their canonical (minimal isomorph) forms.

A k-vertex induced subgraph under a fixed vertex order is written as a bit
string, most significant bit first:

* directed: the off-diagonal adjacency matrix read row by row,
  ``(0,1), (0,2), ..., (1,0), (1,2), ...``  -> ``k(k-1)`` bits
* undirected: the upper triangle read row by row,
  ``(0,1), (0,2), ..., (1,2), ...``         -> ``k(k-1)/2`` bits

The canonical index of a motif is the smallest raw index over all ``k!``
vertex orders.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import comb
from typing import Sequence

import numpy as np

from .graph import CsrGraph

SUPPORTED_K = (3, 4)


def n_max(k: int, directed: bool) -> int:
    """Maximal number of edges among k vertices (also the bit length)."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    return k * (k - 1) if directed else comb(k, 2)


def pair_order(k: int, directed: bool) -> list[tuple[int, int]]:
    """Vertex-position pairs in bit order, most significant first."""
    if directed:
        return [(i, j) for i in range(k) for j in range(k) if i != j]
    return [(i, j) for i in range(k) for j in range(i + 1, k)]


def check_k(k: int) -> None:
    if k not in SUPPORTED_K:
        raise ValueError(f"k must be one of {SUPPORTED_K}, got {k}")


@dataclass(frozen=True)
class MotifIndex:
    raw: int
    k: int
    directed: bool


def encode(vertex_tuple: Sequence[int], g: CsrGraph) -> MotifIndex:
    """Raw index of the subgraph induced by ``vertex_tuple`` in that order."""
    k = len(vertex_tuple)
    if len(set(vertex_tuple)) != k:
        raise ValueError(f"vertex tuple {tuple(vertex_tuple)} has repeated vertices")
    raw = 0
    for i, j in pair_order(k, g.directed):
        raw = (raw << 1) | g.has_edge(vertex_tuple[i], vertex_tuple[j])
    return MotifIndex(raw, k, g.directed)


def decode(raw: np.ndarray | int, k: int, directed: bool) -> np.ndarray:
    """Adjacency matrices (``raw.shape + (k, k)``, bool) for raw indices.

    Undirected indices decode to symmetric matrices.
    """
    raw = np.asarray(raw, dtype=np.int64)
    pairs = pair_order(k, directed)
    bits = len(pairs)
    adj = np.zeros(raw.shape + (k, k), dtype=bool)
    for pos, (i, j) in enumerate(pairs):
        bit = (raw >> (bits - 1 - pos)) & 1
        adj[..., i, j] = bit.astype(bool)
        if not directed:
            adj[..., j, i] = bit.astype(bool)
    return adj


def encode_matrix(adj: np.ndarray, directed: bool) -> np.ndarray:
    """Inverse of :func:`decode` for stacks of adjacency matrices."""
    k = adj.shape[-1]
    pairs = pair_order(k, directed)
    bits = len(pairs)
    raw = np.zeros(adj.shape[:-2], dtype=np.int64)
    for pos, (i, j) in enumerate(pairs):
        raw |= adj[..., i, j].astype(np.int64) << (bits - 1 - pos)
    return raw


@dataclass(frozen=True, eq=False)
class MotifIndexTable:
    """Canonicalization table for one (k, directed) index space.

    ``class_list`` holds the canonical indices of the connected classes in
    ascending order; ``n_edges_of_class`` and ``n_iso_of_class`` are aligned
    with it (edge count and number of labeled isomorphs of each class).
    """

    k: int
    directed: bool
    canonical_of_raw: np.ndarray
    connected_of_raw: np.ndarray
    class_list: np.ndarray
    n_edges_of_class: np.ndarray
    n_iso_of_class: np.ndarray

    @property
    def bits(self) -> int:
        return n_max(self.k, self.directed)

    @property
    def space(self) -> str:
        return f"{'directed' if self.directed else 'undirected'}-k{self.k}"

    @property
    def num_classes(self) -> int:
        return len(self.class_list)

    def class_position(self, canonical: int) -> int:
        """Column of ``canonical`` in ``class_list``; KeyError if not a connected class."""
        pos = int(np.searchsorted(self.class_list, canonical))
        if pos >= len(self.class_list) or self.class_list[pos] != canonical:
            raise KeyError(f"{canonical} is not a connected canonical class of {self.space}")
        return pos

    def column_of_raw(self) -> np.ndarray:
        """Map raw index -> class column (-1 for disconnected raw indices)."""
        col = np.full(len(self.canonical_of_raw), -1, dtype=np.int64)
        conn = self.connected_of_raw
        col[conn] = np.searchsorted(self.class_list, self.canonical_of_raw[conn])
        return col


def _underlying_connected(adj: np.ndarray) -> np.ndarray:
    k = adj.shape[-1]
    und = adj | np.swapaxes(adj, -1, -2) | np.eye(k, dtype=bool)
    reach = und.copy()
    for _ in range(k):
        reach = (reach.astype(np.int64) @ und.astype(np.int64)) > 0
    return reach[..., 0, :].all(axis=-1)


@lru_cache(maxsize=None)
def build_table(k: int, directed: bool) -> MotifIndexTable:
    check_k(k)
    bits = n_max(k, directed)
    raws = np.arange(1 << bits, dtype=np.int64)
    adj = decode(raws, k, directed)
    canon = raws.copy()
    for perm in permutations(range(k)):
        p = np.asarray(perm)
        permuted = adj[:, p][:, :, p]
        np.minimum(canon, encode_matrix(permuted, directed), out=canon)
    connected = _underlying_connected(adj)
    classes, n_iso = np.unique(canon[connected], return_counts=True)
    n_edges = np.array([bin(int(c)).count("1") for c in classes], dtype=np.int64)
    for arr in (canon, connected, classes, n_iso, n_edges):
        arr.setflags(write=False)
    return MotifIndexTable(k, directed, canon, connected, classes, n_edges, n_iso)
