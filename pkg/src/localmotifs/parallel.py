"""Split per-root counting work over threads.

The counting kernel releases the GIL, so worker threads share the graph
arrays without copies. Each shard fills a private count matrix; the
matrices are summed in shard order at the end.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .enumerator import CountMatrix, count_tasks, kernel_arrays, _space_setup
from .graph import CsrGraph, degree_order, relabel, undirected_view
from .motif_index import MotifIndexTable, check_k

GRANULARITIES = ("root", "root-neighbor")


class ShardFailure(RuntimeError):
    def __init__(self, shard_id, cause):
        self.shard_id = shard_id
        super().__init__(f"shard {shard_id} failed: {cause!r}")


@dataclass
class WorkPlan:
    """``shards[w]`` is a pair of arrays (roots, first depth-1 vertices).

    A first vertex of -1 stands for the whole root.
    """

    shards: list[tuple[np.ndarray, np.ndarray]]
    num_workers: int
    granularity: str

    def roots_processed(self) -> int:
        """Sum over shards of the distinct roots each one touches."""
        return sum(len(np.unique(r)) for r, _ in self.shards)

    def num_tasks(self) -> int:
        return sum(len(r) for r, _ in self.shards)


def default_workers() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def plan_work(g: CsrGraph, num_workers: int, granularity: str = "root") -> WorkPlan:
    """Deal roots (or root/neighbor tasks) round-robin in degree-descending order."""
    if num_workers < 1:
        raise ValueError(f"num_workers must be >= 1, got {num_workers}")
    if granularity not in GRANULARITIES:
        raise ValueError(f"granularity must be one of {GRANULARITIES}, got {granularity!r}")
    ordering = degree_order(g)
    if granularity == "root":
        roots = ordering.old_of_new
        firsts = np.full(len(roots), -1, dtype=np.int64)
    else:
        und = undirected_view(g)
        src = np.repeat(np.arange(und.num_vertices, dtype=np.int64), und.degrees())
        keep = und.neighbors > src
        src, dst = src[keep], und.neighbors[keep].astype(np.int64)
        # heavy roots first, each root's neighbors in ascending order
        idx = np.lexsort((dst, ordering.new_of_old[src]))
        roots, firsts = src[idx], dst[idx]
    shards = [(roots[w::num_workers].copy(), firsts[w::num_workers].copy())
              for w in range(num_workers)]
    return WorkPlan(shards, num_workers, granularity)


def parallel_count(g: CsrGraph, k: int, plan: WorkPlan, space: str = "raw",
                   table: Optional[MotifIndexTable] = None) -> CountMatrix:
    """Run every shard of ``plan`` on its own thread and sum the results."""
    check_k(k)
    _, columns = _space_setup(k, g.directed, space, table)
    kernel_arrays(g)  # build shared arrays once, before threads start

    def run(shard):
        roots, firsts = shard
        return count_tasks(g, k, roots, firsts, space=space, table=table).counts

    total = np.zeros((g.num_vertices, len(columns)), dtype=np.int64)
    with ThreadPoolExecutor(max_workers=plan.num_workers) as pool:
        futures = [pool.submit(run, s) for s in plan.shards]
        for i, fut in enumerate(futures):
            try:
                total += fut.result()
            except Exception as exc:
                raise ShardFailure(i, exc) from exc
    return CountMatrix(total, k, g.directed, columns, space)


def count_local_motifs(g: CsrGraph, k: int, workers: Optional[int] = None,
                       granularity: str = "root",
                       table: Optional[MotifIndexTable] = None) -> CountMatrix:
    """End-to-end canonical counts, rows in the labeling of ``g``.

    Relabels by degree order, counts in parallel, merges isomorphs on the
    fly and maps rows back.
    """
    ordering = degree_order(g)
    h = relabel(g, ordering)
    plan = plan_work(h, workers or default_workers(), granularity)
    m = parallel_count(h, k, plan, space="canonical", table=table)
    return m.permute_rows(ordering.old_of_new)
