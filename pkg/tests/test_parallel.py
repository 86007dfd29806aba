import numpy as np
import pytest

import localmotifs.parallel as par
from localmotifs.enumerator import count_motifs
from localmotifs.graph import EdgeList, build_csr, degree_order
from localmotifs.parallel import (GRANULARITIES, ShardFailure, count_local_motifs,
                                  parallel_count, plan_work)
from localmotifs.oracle import brute_force_count

from conftest import cycle, random_graph, star


def test_round_robin_four_roots():
    plan = plan_work(cycle(4), 2)
    assert [s[0].tolist() for s in plan.shards] == [[0, 2], [1, 3]]


def test_single_worker_single_shard():
    g = random_graph(10, 0.3, True, 0)
    plan = plan_work(g, 1)
    assert len(plan.shards) == 1
    assert sorted(plan.shards[0][0].tolist()) == list(range(10))


def test_star_root_neighbor_tasks():
    plan = plan_work(star(6), 3, "root-neighbor")
    roots = np.concatenate([r for r, _ in plan.shards])
    assert (roots == 0).sum() == 6
    assert plan.num_tasks() == 6


def test_heavy_roots_dealt_first():
    g = random_graph(20, 0.3, False, 3)
    order = degree_order(g).old_of_new
    plan = plan_work(g, 3)
    assert [s[0][0] for s in plan.shards] == order[:3].tolist()


@pytest.mark.parametrize("granularity", GRANULARITIES)
@pytest.mark.parametrize("workers", [1, 3, 5])
def test_plan_partitions_tasks(granularity, workers):
    g = random_graph(25, 0.25, True, 11)
    plan = plan_work(g, workers, granularity)
    tasks = [(r, f) for roots, firsts in plan.shards for r, f in zip(roots, firsts)]
    assert len(tasks) == len(set(tasks))
    if granularity == "root":
        assert sorted(r for r, _ in tasks) == list(range(25))
        assert plan.roots_processed() == 25


def test_bad_plan_args():
    with pytest.raises(ValueError):
        plan_work(cycle(4), 0)
    with pytest.raises(ValueError):
        plan_work(cycle(4), 2, "edge")


@pytest.mark.parametrize("k", [3, 4])
@pytest.mark.parametrize("granularity", GRANULARITIES)
def test_parallel_matches_sequential(k, granularity):
    g = random_graph(60, 0.15, True, 2)
    ref = count_motifs(g, k)
    for w in (1, 2, 4, 8):
        assert parallel_count(g, k, plan_work(g, w, granularity)) == ref


def test_empty_graph():
    g = build_csr(EdgeList.from_pairs([], True, 5))
    for gran in GRANULARITIES:
        m = parallel_count(g, 3, plan_work(g, 3, gran))
        assert not m.counts.any()


def test_shard_failure_is_reported(monkeypatch):
    g = random_graph(10, 0.3, True, 0)
    real = par.count_tasks
    plan = plan_work(g, 2)

    def flaky(g_, k, roots, firsts, **kw):
        if np.array_equal(roots, plan.shards[1][0]):
            raise MemoryError("boom")
        return real(g_, k, roots, firsts, **kw)

    monkeypatch.setattr(par, "count_tasks", flaky)
    with pytest.raises(ShardFailure) as err:
        parallel_count(g, 3, plan)
    assert err.value.shard_id == 1


def test_end_to_end_rows_in_input_labels():
    g = random_graph(20, 0.3, True, 8)
    assert count_local_motifs(g, 4, workers=3) == brute_force_count(g, 4).counts
