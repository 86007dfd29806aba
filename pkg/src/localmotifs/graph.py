"""Edge lists, CSR graphs and degree-descending relabeling."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

log = logging.getLogger(__name__)


class GraphInputError(ValueError):
    """Raised for malformed graph input (bad lines, self-loops, bad ids)."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)


@dataclass
class EdgeList:
    """Simple graph as an (m, 2) array of vertex ids in ``[0, num_vertices)``.

    ``original_ids[i]`` is the user-facing id of dense vertex ``i``; when the
    list was built in memory it is simply ``arange(num_vertices)``.
    """

    edges: np.ndarray
    directed: bool
    num_vertices: int
    original_ids: Optional[np.ndarray] = None

    def __post_init__(self):
        self.edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if self.original_ids is None:
            self.original_ids = np.arange(self.num_vertices, dtype=np.int64)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]], directed: bool,
                   num_vertices: Optional[int] = None) -> "EdgeList":
        arr = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
        if num_vertices is None:
            num_vertices = int(arr.max()) + 1 if len(arr) else 0
        return cls(arr, directed, num_vertices)


@dataclass(frozen=True, eq=False)
class CsrGraph:
    """Compressed sparse row adjacency.

    ``neighbors[indices[v]:indices[v+1]]`` is the sorted neighbor block of
    ``v``. Directed graphs store out-neighbors; undirected graphs store each
    edge in both blocks.
    """

    indices: np.ndarray
    neighbors: np.ndarray
    directed: bool
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def num_vertices(self) -> int:
        return len(self.indices) - 1

    @property
    def num_edges(self) -> int:
        if self.directed:
            return len(self.neighbors)
        return len(self.neighbors) // 2

    def degrees(self) -> np.ndarray:
        return np.diff(self.indices)

    def block(self, v: int) -> np.ndarray:
        return self.neighbors[self.indices[v]:self.indices[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        blk = self.block(u)
        pos = np.searchsorted(blk, v)
        return bool(pos < len(blk) and blk[pos] == v)

    def to_edges(self) -> np.ndarray:
        """Expand back to an edge array; undirected edges come out as (min, max)."""
        src = np.repeat(np.arange(self.num_vertices, dtype=np.int64), self.degrees())
        edges = np.stack([src, self.neighbors.astype(np.int64)], axis=1)
        if not self.directed:
            edges = edges[edges[:, 0] < edges[:, 1]]
        return edges

    def __eq__(self, other):
        if not isinstance(other, CsrGraph):
            return NotImplemented
        return (self.directed == other.directed
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.neighbors, other.neighbors))


@dataclass(frozen=True)
class VertexOrdering:
    new_of_old: np.ndarray
    old_of_new: np.ndarray

    @classmethod
    def from_old_of_new(cls, old_of_new) -> "VertexOrdering":
        old_of_new = np.asarray(old_of_new, dtype=np.int64)
        new_of_old = np.empty_like(old_of_new)
        new_of_old[old_of_new] = np.arange(len(old_of_new), dtype=np.int64)
        return cls(new_of_old, old_of_new)


def _from_sorted_pairs(src: np.ndarray, dst: np.ndarray, n: int, directed: bool) -> CsrGraph:
    # src/dst must already be lexicographically sorted and unique
    counts = np.bincount(src, minlength=n)
    indices = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indices[1:])
    return CsrGraph(indices, dst.astype(np.int64, copy=True), directed)


def _unique_pairs(src: np.ndarray, dst: np.ndarray, n: int):
    keys = np.unique(src.astype(np.int64) * max(n, 1) + dst.astype(np.int64))
    return keys // max(n, 1), keys % max(n, 1)


def _normalize(edges: np.ndarray, n: int, directed: bool):
    """Validate and dedupe; returns per-direction (src, dst) adjacency pairs."""
    if len(edges) == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    if edges.min() < 0 or edges.max() >= n:
        bad = edges[((edges < 0) | (edges >= n)).any(axis=1)][0]
        raise GraphInputError(
            f"vertex id out of range in edge ({bad[0]}, {bad[1]}) for {n} vertices")
    loops = edges[:, 0] == edges[:, 1]
    if loops.any():
        u = edges[loops][0, 0]
        raise GraphInputError(f"self-loop ({u}, {u}) is not allowed")
    src, dst = edges[:, 0], edges[:, 1]
    if not directed:
        src, dst = np.concatenate([src, dst]), np.concatenate([dst, src])
    return _unique_pairs(src, dst, n)


def build_csr(edge_list: EdgeList) -> CsrGraph:
    """Build the CSR form of ``edge_list``; duplicate edges are dropped."""
    n = edge_list.num_vertices
    src, dst = _normalize(edge_list.edges, n, edge_list.directed)
    return _from_sorted_pairs(src, dst, n, edge_list.directed)


def undirected_view(g: CsrGraph) -> CsrGraph:
    """Underlying undirected graph (an undirected input is returned as is)."""
    if not g.directed:
        return g
    cached = g._cache.get("undirected")
    if cached is not None:
        return cached
    n = g.num_vertices
    src = np.repeat(np.arange(n, dtype=np.int64), g.degrees())
    dst = g.neighbors.astype(np.int64)
    src, dst = _unique_pairs(np.concatenate([src, dst]), np.concatenate([dst, src]), n)
    view = _from_sorted_pairs(src, dst, n, directed=False)
    g._cache["undirected"] = view
    return view


def degree_order(g: CsrGraph) -> VertexOrdering:
    """Order vertices by undirected degree, highest first; ties by ascending id."""
    deg = undirected_view(g).degrees()
    # lexsort is stable on the last key; -deg first, then id
    old_of_new = np.lexsort((np.arange(len(deg)), -deg))
    return VertexOrdering.from_old_of_new(old_of_new)


def relabel(g: CsrGraph, ordering: VertexOrdering) -> CsrGraph:
    """Return the graph whose vertex ``i`` is ``ordering.old_of_new[i]`` of ``g``."""
    n = g.num_vertices
    if len(ordering.new_of_old) != n or len(ordering.old_of_new) != n:
        raise ValueError(
            f"ordering has {len(ordering.new_of_old)} entries, graph has {n} vertices")
    src = np.repeat(np.arange(n, dtype=np.int64), g.degrees())
    src = ordering.new_of_old[src]
    dst = ordering.new_of_old[g.neighbors]
    src, dst = _unique_pairs(src, dst, n)
    return _from_sorted_pairs(src, dst, n, g.directed)


def load_edge_list(path, directed: bool, self_loops: str = "reject") -> EdgeList:
    """Parse a whitespace-separated edge-list file.

    Lines starting with ``#`` or ``%`` are comments. Extra columns after the
    first two (weights, timestamps) are ignored. Vertex ids are compacted to
    ``[0, n)`` in ascending numeric order and the original ids are kept in
    ``EdgeList.original_ids``.

    ``self_loops`` is ``"reject"`` (raise) or ``"skip"`` (drop with a warning).
    """
    if self_loops not in ("reject", "skip"):
        raise ValueError(f"self_loops must be 'reject' or 'skip', not {self_loops!r}")
    path = os.fspath(path)
    raw = []
    skipped = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s[0] in "#%":
                continue
            parts = s.split()
            if len(parts) < 2:
                raise GraphInputError(f"expected 'src dst', got {s!r}", path, lineno)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphInputError(f"non-integer vertex id in {s!r}", path, lineno) from None
            if u == v:
                if self_loops == "reject":
                    raise GraphInputError(f"self-loop ({u}, {u}) is not allowed", path, lineno)
                skipped += 1
                continue
            raw.append((u, v))
    if skipped:
        log.warning("%s: skipped %d self-loop(s)", path, skipped)
    arr = np.asarray(raw, dtype=np.int64).reshape(-1, 2)
    ids, dense = np.unique(arr, return_inverse=True)
    return EdgeList(dense.reshape(-1, 2), directed, len(ids), original_ids=ids)
