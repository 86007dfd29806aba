"""Per-vertex 3- and 4-motif counting by proper BFS enumeration.

Every connected k-set is visited from its lowest-index vertex (the root)
only, and within that root's BFS each set is produced by exactly one
structure:

k = 3
    two depth-1 vertices ``u < w``; or a depth-1 ``u`` and a depth-2 child.
k = 4
    * three depth-1 vertices ``u < v < w``
    * two depth-1 vertices ``u < v`` and a depth-2 child of either
      (taken from ``u`` when it is adjacent to both)
    * one depth-1 ``u`` with two depth-2 children ``x < y``
    * a chain ``u - x - y`` of depths 1, 2, 3.  The tail ``y`` may carry global
      depth 2 through a depth-1 vertex outside the chain; it is accepted as
      long as it is neither a depth-1 vertex nor adjacent to ``u``.

Edges are never followed from a deeper vertex back to a shallower or equal
one, and vertices below the root index are skipped everywhere, which is the
logical removal of already processed roots.

Vertices are ordered by (depth, index) before encoding, so each occurrence
has a well defined raw index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from .graph import CsrGraph, undirected_view
from .motif_index import MotifIndexTable, build_table, check_k, n_max


class CensusError(RuntimeError):
    """Internal consistency failure in counted totals."""


@dataclass
class CountMatrix:
    """Motif counts per vertex.

    ``counts[v, j]`` is the number of counted motifs with index
    ``columns[j]`` that contain vertex ``v``. In ``"raw"`` space the columns
    are every raw index ``0 .. 2**bits - 1``; in ``"canonical"`` space they
    are the connected classes of the matching table.
    """

    counts: np.ndarray
    k: int
    directed: bool
    columns: np.ndarray
    space: str

    @property
    def num_vertices(self) -> int:
        return self.counts.shape[0]

    def column(self, motif: int) -> np.ndarray:
        pos = int(np.searchsorted(self.columns, motif))
        if pos >= len(self.columns) or self.columns[pos] != motif:
            raise KeyError(f"motif {motif} is not a column of this matrix")
        return self.counts[:, pos]

    def permute_rows(self, old_of_new: np.ndarray) -> "CountMatrix":
        """Rows keyed by the original labels of a relabeled graph."""
        out = np.empty_like(self.counts)
        out[old_of_new] = self.counts
        return CountMatrix(out, self.k, self.directed, self.columns, self.space)

    def __eq__(self, other):
        if not isinstance(other, CountMatrix):
            return NotImplemented
        return (self.k == other.k and self.directed == other.directed
                and self.space == other.space
                and np.array_equal(self.columns, other.columns)
                and np.array_equal(self.counts, other.counts))


# ---------------------------------------------------------------------------
# numba kernel

@njit(nogil=True, cache=True, inline="always")
def _flag(uind, unbr, uflag, a, b):
    """Direction flags of pair (a, b): bit 0 = a->b, bit 1 = b->a; 0 if absent."""
    lo = uind[a]
    hi = uind[a + 1]
    while lo < hi:
        mid = (lo + hi) >> 1
        w = unbr[mid]
        if w < b:
            lo = mid + 1
        elif w > b:
            hi = mid
        else:
            return uflag[mid]
    return 0


@njit(nogil=True, cache=True, inline="always")
def _code3(directed, f01, f02, f12):
    if not directed:
        return ((f01 > 0) << 2) | ((f02 > 0) << 1) | (f12 > 0)
    return (((f01 & 1) << 5) | ((f02 & 1) << 4) | ((f01 >> 1) << 3)
            | ((f12 & 1) << 2) | ((f02 >> 1) << 1) | (f12 >> 1))


@njit(nogil=True, cache=True, inline="always")
def _code4(directed, f01, f02, f03, f12, f13, f23):
    if not directed:
        return (((f01 > 0) << 5) | ((f02 > 0) << 4) | ((f03 > 0) << 3)
                | ((f12 > 0) << 2) | ((f13 > 0) << 1) | (f23 > 0))
    return (((f01 & 1) << 11) | ((f02 & 1) << 10) | ((f03 & 1) << 9)
            | ((f01 >> 1) << 8) | ((f12 & 1) << 7) | ((f13 & 1) << 6)
            | ((f02 >> 1) << 5) | ((f12 >> 1) << 4) | ((f23 & 1) << 3)
            | ((f03 >> 1) << 2) | ((f13 >> 1) << 1) | (f23 >> 1))


@njit(nogil=True, cache=True)
def _count_tasks(uind, unbr, uflag, directed, k, col_of_raw, counts,
                 task_roots, task_firsts):
    """Count all motifs of the given (root, first depth-1 vertex) tasks.

    ``task_firsts[t] < 0`` means every depth-1 vertex of the root. ``counts``
    is accumulated in place.
    """
    n = len(uind) - 1
    depth1 = np.full(n, -1, np.int32)   # depth1[v] == r  <=>  v is a depth-1 vertex of r
    nbr_u = np.full(n, -1, np.int32)    # nbr_u[v] == u   <=>  v adjacent to u
    marked_root = -1
    for t in range(len(task_roots)):
        r = task_roots[t]
        first = task_firsts[t]
        r_lo = uind[r]
        r_hi = uind[r + 1]
        # skip the part of r's block below the root
        start = r_lo
        while start < r_hi and unbr[start] <= r:
            start += 1
        if r != marked_root:
            marked_root = r
            for i in range(start, r_hi):
                depth1[unbr[i]] = r
        for iu in range(start, r_hi):
            u = unbr[iu]
            if first >= 0 and u != first:
                continue
            f_ru = uflag[iu]
            u_lo = uind[u]
            u_hi = uind[u + 1]
            if k == 4:
                for i in range(u_lo, u_hi):
                    nbr_u[unbr[i]] = u
            if k == 3:
                # two depth-1 vertices
                for iw in range(iu + 1, r_hi):
                    w = unbr[iw]
                    c = col_of_raw[_code3(directed, f_ru, uflag[iw],
                                          _flag(uind, unbr, uflag, u, w))]
                    counts[r, c] += 1
                    counts[u, c] += 1
                    counts[w, c] += 1
                # depth-1 -> depth-2
                for ix in range(u_lo, u_hi):
                    x = unbr[ix]
                    if x <= r or depth1[x] == r:
                        continue
                    c = col_of_raw[_code3(directed, f_ru, 0, uflag[ix])]
                    counts[r, c] += 1
                    counts[u, c] += 1
                    counts[x, c] += 1
                continue

            # k == 4
            for iv in range(iu + 1, r_hi):
                v = unbr[iv]
                f_rv = uflag[iv]
                f_uv = _flag(uind, unbr, uflag, u, v)
                # three depth-1 vertices (average depth 0.75)
                for iw in range(iv + 1, r_hi):
                    w = unbr[iw]
                    c = col_of_raw[_code4(directed, f_ru, f_rv, uflag[iw], f_uv,
                                          _flag(uind, unbr, uflag, u, w),
                                          _flag(uind, unbr, uflag, v, w))]
                    counts[r, c] += 1
                    counts[u, c] += 1
                    counts[v, c] += 1
                    counts[w, c] += 1
                # two depth-1 plus one depth-2 (average depth 1)
                for ix in range(u_lo, u_hi):
                    x = unbr[ix]
                    if x <= r or depth1[x] == r:
                        continue
                    c = col_of_raw[_code4(directed, f_ru, f_rv, 0, f_uv, uflag[ix],
                                          _flag(uind, unbr, uflag, v, x))]
                    counts[r, c] += 1
                    counts[u, c] += 1
                    counts[v, c] += 1
                    counts[x, c] += 1
                for ix in range(uind[v], uind[v + 1]):
                    x = unbr[ix]
                    if x <= r or depth1[x] == r or nbr_u[x] == u:
                        continue
                    c = col_of_raw[_code4(directed, f_ru, f_rv, 0, f_uv, 0, uflag[ix])]
                    counts[r, c] += 1
                    counts[u, c] += 1
                    counts[v, c] += 1
                    counts[x, c] += 1
            for ix in range(u_lo, u_hi):
                x = unbr[ix]
                if x <= r or depth1[x] == r:
                    continue
                f_ux = uflag[ix]
                # one depth-1 with two depth-2 children (average depth 1.25)
                for iy in range(ix + 1, u_hi):
                    y = unbr[iy]
                    if depth1[y] == r:
                        continue
                    c = col_of_raw[_code4(directed, f_ru, 0, 0, f_ux, uflag[iy],
                                          _flag(uind, unbr, uflag, x, y))]
                    counts[r, c] += 1
                    counts[u, c] += 1
                    counts[x, c] += 1
                    counts[y, c] += 1
                # chain of depths 1, 2, 3 (average depth 1.5); y may be a
                # depth-2 vertex reached through another branch
                for iy in range(uind[x], uind[x + 1]):
                    y = unbr[iy]
                    if y <= r or depth1[y] == r or nbr_u[y] == u or y == u:
                        continue
                    c = col_of_raw[_code4(directed, f_ru, 0, 0, f_ux, 0, uflag[iy])]
                    counts[r, c] += 1
                    counts[u, c] += 1
                    counts[x, c] += 1
                    counts[y, c] += 1


# ---------------------------------------------------------------------------

def kernel_arrays(g: CsrGraph):
    """Undirected CSR of ``g`` plus per-entry direction flags (cached on ``g``)."""
    if g.num_vertices >= 2**31:
        raise ValueError("graphs with 2**31 or more vertices are not supported")
    cached = g._cache.get("kernel")
    if cached is not None:
        return cached
    und = undirected_view(g)
    n = g.num_vertices
    if g.directed:
        src = np.repeat(np.arange(n, dtype=np.int64), g.degrees())
        keys = src * n + g.neighbors  # already sorted: blocks ascending, each sorted
        usrc = np.repeat(np.arange(n, dtype=np.int64), und.degrees())
        unbr = und.neighbors

        def present(q):
            pos = np.searchsorted(keys, q)
            pos = np.minimum(pos, max(len(keys) - 1, 0))
            return (keys[pos] == q) if len(keys) else np.zeros(len(q), bool)

        flags = (present(usrc * n + unbr).astype(np.uint8)
                 | (present(unbr * n + usrc).astype(np.uint8) << 1))
    else:
        flags = np.full(len(und.neighbors), 3, dtype=np.uint8)
    # narrow dtypes keep the hot arrays cache resident on large graphs
    out = (und.indices.astype(np.int64), und.neighbors.astype(np.int32), flags)
    g._cache["kernel"] = out
    return out


def raw_columns(k: int, directed: bool) -> np.ndarray:
    return np.arange(1 << n_max(k, directed), dtype=np.int64)


def _space_setup(k, directed, space, table):
    if space == "raw":
        cols = raw_columns(k, directed)
        return cols, cols
    if space == "canonical":
        table = table or build_table(k, directed)
        if table.k != k or table.directed != directed:
            raise ValueError(f"table space {table.space} does not match k={k}, directed={directed}")
        return table.column_of_raw(), table.class_list.astype(np.int64)
    raise ValueError(f"space must be 'raw' or 'canonical', got {space!r}")


def count_tasks(g: CsrGraph, k: int, task_roots, task_firsts=None,
                space: str = "raw", table: Optional[MotifIndexTable] = None) -> CountMatrix:
    """Count the motifs owned by a list of (root, first depth-1 vertex) tasks."""
    check_k(k)
    col_of_raw, columns = _space_setup(k, g.directed, space, table)
    task_roots = np.ascontiguousarray(task_roots, dtype=np.int64)
    if task_firsts is None:
        task_firsts = np.full(len(task_roots), -1, dtype=np.int64)
    task_firsts = np.ascontiguousarray(task_firsts, dtype=np.int64)
    uind, unbr, uflag = kernel_arrays(g)
    counts = np.zeros((g.num_vertices, len(columns)), dtype=np.int64)
    _count_tasks(uind, unbr, uflag, g.directed, k, col_of_raw, counts,
                 task_roots, task_firsts)
    return CountMatrix(counts, k, g.directed, columns, space)


def count_motifs(g: CsrGraph, k: int, space: str = "raw",
                 table: Optional[MotifIndexTable] = None) -> CountMatrix:
    """Count, for every vertex, the connected k-motifs that contain it.

    The result is in raw index space unless ``space="canonical"``, in which
    case isomorphs are merged as they are counted (same numbers as
    ``merge_isomorphs(count_motifs(g, k), table)`` without the wide raw matrix).
    """
    return count_tasks(g, k, np.arange(g.num_vertices), space=space, table=table)


def merge_isomorphs(raw: CountMatrix, table: Optional[MotifIndexTable] = None) -> CountMatrix:
    """Sum the raw columns of each connected class into its canonical column."""
    table = table or build_table(raw.k, raw.directed)
    if raw.space == "canonical":
        if table.k != raw.k or table.directed != raw.directed:
            raise ValueError(f"table space {table.space} does not match the count matrix")
        return raw
    if (table.k, table.directed) != (raw.k, raw.directed) or len(raw.columns) != len(table.canonical_of_raw):
        raise ValueError(f"table space {table.space} does not match the count matrix")
    col = table.column_of_raw()
    keep = col >= 0
    merged = np.zeros((raw.num_vertices, table.num_classes), dtype=np.int64)
    # add.at over columns: transpose so the scatter axis is the first one
    np.add.at(merged.T, col[keep], raw.counts[:, keep].T)
    return CountMatrix(merged, raw.k, raw.directed, table.class_list.astype(np.int64), "canonical")


def total_motif_census(m: CountMatrix) -> dict[int, int]:
    """Graph-level number of occurrences per class (column sum / k)."""
    sums = m.counts.sum(axis=0)
    bad = np.nonzero(sums % m.k)[0]
    if len(bad):
        j = bad[0]
        raise CensusError(
            f"column {int(m.columns[j])} sums to {int(sums[j])}, not divisible by k={m.k}")
    return {int(c): int(s) // m.k for c, s in zip(m.columns, sums)}
