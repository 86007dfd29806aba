"""Scaling harness: wall time of the counting stage on G(n, p) graphs.

Graph generation, relabeling and the kernel's array preparation happen
before the clock starts; only ``parallel_count`` is timed (best of
``repeats`` runs).
"""

from __future__ import annotations

import csv
import time
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence, TextIO

from .enumerator import count_motifs, kernel_arrays, total_motif_census
from .graph import degree_order, relabel
from .parallel import parallel_count, plan_work
from .random_theory import GnpParams, generate_gnp

CSV_FIELDS = ("n", "p", "k", "workers", "seconds", "total_motifs")


@dataclass
class BenchPoint:
    n: int
    p: float
    k: int
    workers: int
    seconds: float
    total_motifs: int
    directed: bool = True

    @property
    def seconds_per_motif(self) -> float:
        return self.seconds / self.total_motifs if self.total_motifs else float("nan")


def fixed_degree_series(ns: Iterable[int], degree: float = 10.0, directed: bool = True,
                        seed: int = 0) -> list[GnpParams]:
    """G(n, degree/(n-1)): expected out-degree (or degree) fixed as n grows."""
    return [GnpParams(n, degree / (n - 1), directed, seed) for n in ns]


def warm_up(k: int) -> None:
    """Trigger numba compilation outside any timed region."""
    g = generate_gnp(GnpParams(12, 0.4, True, 0))
    count_motifs(g, k, space="canonical")
    count_motifs(generate_gnp(GnpParams(12, 0.4, False, 0)), k, space="canonical")


def run_scaling_suite(grid: Sequence[GnpParams], k: int, workers: Sequence[int] = (1,),
                      repeats: int = 3, granularity: str = "root") -> list[BenchPoint]:
    warm_up(k)
    points = []
    for params in grid:
        g = generate_gnp(params)
        g = relabel(g, degree_order(g))
        kernel_arrays(g)
        for w in workers:
            plan = plan_work(g, w, granularity)
            best = float("inf")
            for _ in range(repeats):
                t0 = time.perf_counter()
                m = parallel_count(g, k, plan, space="canonical")
                best = min(best, time.perf_counter() - t0)
            total = sum(total_motif_census(m).values())
            points.append(BenchPoint(params.n, params.p, k, w, best, total, params.directed))
    return points


def write_bench_csv(fh: TextIO, points: Iterable[BenchPoint]) -> None:
    w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for pt in points:
        w.writerow(asdict(pt))
