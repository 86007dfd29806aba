import csv
import io
import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from localmotifs.enumerator import count_motifs, total_motif_census
from localmotifs.graph import EdgeList, build_csr
from localmotifs.motif_index import build_table
from localmotifs.random_theory import (GnpParams, class_probabilities, compare_to_theory,
                                       expected_count, expected_profile, generate_gnp,
                                       total_covariance)

from conftest import clique, star


def test_p_zero_is_empty():
    assert generate_gnp(GnpParams(50, 0.0, True, 1)).num_edges == 0


@pytest.mark.parametrize("directed", [False, True])
def test_p_one_is_complete(directed):
    g = generate_gnp(GnpParams(4, 1.0, directed, 3))
    assert g.num_edges == (12 if directed else 6)
    assert g == clique(4, directed)


def test_density_within_three_sigma():
    g = generate_gnp(GnpParams(1000, 0.1, True, 42))
    pairs = 1000 * 999
    sd = np.sqrt(0.1 * 0.9 / pairs)
    assert abs(g.num_edges / pairs - 0.1) < 3 * sd


def test_undirected_pairs_valid():
    g = generate_gnp(GnpParams(300, 0.3, False, 5))
    e = g.to_edges()
    assert np.all(e[:, 0] < e[:, 1]) and e.max() < 300


def test_seeded_reproducible():
    a = generate_gnp(GnpParams(200, 0.05, True, 9))
    assert a == generate_gnp(GnpParams(200, 0.05, True, 9))
    assert a != generate_gnp(GnpParams(200, 0.05, True, 10))


def test_bad_params():
    with pytest.raises(ValueError):
        GnpParams(10, 1.5, True)
    with pytest.raises(ValueError):
        GnpParams(0, 0.5, True)


def test_expected_complete_class_p_one():
    assert expected_count(3, 63, GnpParams(5, 1.0, True)) == pytest.approx(6.0)


def test_expected_undirected_triangle():
    assert expected_count(3, 7, GnpParams(100, 0.1, False)) == pytest.approx(4.851)


def test_expected_p_zero():
    assert expected_count(3, 6, GnpParams(100, 0.0, True)) == 0.0


def test_expected_unknown_class():
    with pytest.raises(KeyError):
        expected_count(3, 53, GnpParams(10, 0.2, True))


@pytest.mark.parametrize("k,directed", [(3, True), (3, False), (4, True), (4, False)])
def test_isomorph_bookkeeping(k, directed):
    t = build_table(k, directed)
    p = 0.27
    raws = np.nonzero(t.connected_of_raw)[0]
    e = np.array([bin(r).count("1") for r in raws])
    per_raw = np.sum(p ** e * (1 - p) ** (t.bits - e))
    assert class_probabilities(t, p).sum() == pytest.approx(per_raw, rel=1e-12)
    prof = expected_profile(k, GnpParams(40, p, directed))
    assert np.all(prof.expected >= 0)
    assert prof.expected.sum() <= comb(39, k - 1)


@given(st.floats(0, 1), st.floats(0, 1))
def test_complete_class_monotone(p1, p2):
    lo, hi = sorted((p1, p2))
    c = int(build_table(4, True).class_list[-1])
    assert expected_count(4, c, GnpParams(30, lo, True)) <= expected_count(4, c, GnpParams(30, hi, True))


@pytest.mark.parametrize("n,directed,k", [(5, False, 3), (5, False, 4), (4, True, 3)])
def test_covariance_exact_by_enumeration(n, directed, k):
    """Mean and covariance of class totals over every labeled graph on n vertices."""
    p = 0.3
    pairs = list(itertools.permutations(range(n), 2) if directed
                 else itertools.combinations(range(n), 2))
    totals, weights = [], []
    for mask in range(1 << len(pairs)):
        edges = [pr for i, pr in enumerate(pairs) if mask >> i & 1]
        g = build_csr(EdgeList.from_pairs(edges, directed, n))
        totals.append(list(total_motif_census(count_motifs(g, k, space="canonical")).values()))
        weights.append(p ** len(edges) * (1 - p) ** (len(pairs) - len(edges)))
    totals, weights = np.array(totals, float), np.array(weights)
    mean = weights @ totals
    centered = totals - mean
    cov = centered.T @ (centered * weights[:, None])
    params = GnpParams(n, p, directed)
    assert np.allclose(mean, expected_profile(k, params).expected * n / k, atol=1e-12)
    assert np.allclose(cov, total_covariance(build_table(k, directed), params), atol=1e-12)


def test_gnp_validation_not_flagged():
    params = GnpParams(1000, 0.1, True, 0)
    report = compare_to_theory(count_motifs(generate_gnp(params), 3, space="canonical"), params)
    assert not report.flagged
    assert not report.chi2_significant


def test_star_graph_rejected():
    g = star(99, directed=True)
    report = compare_to_theory(count_motifs(g, 3, space="canonical"), GnpParams(100, 0.1, True))
    assert len(report.flagged) >= 2
    assert report.chi2_significant


def test_complete_graph_exact():
    params = GnpParams(8, 1.0, True)
    m = count_motifs(generate_gnp(params), 4, space="canonical")
    report = compare_to_theory(m, params)
    assert m.counts[:, -1].tolist() == [comb(7, 3)] * 8
    assert not report.flagged


def test_mismatched_p_flagged():
    m = count_motifs(generate_gnp(GnpParams(300, 0.2, False, 1)), 3, space="canonical")
    assert compare_to_theory(m, GnpParams(300, 0.1, False, 1)).flagged


def test_report_csv_and_text():
    params = GnpParams(200, 0.1, False, 3)
    report = compare_to_theory(count_motifs(generate_gnp(params), 4, space="canonical"), params)
    rows = list(csv.DictReader(io.StringIO(report.to_csv())))
    assert list(rows[0]) == ["class", "observed_mean", "expected", "z", "flagged"]
    assert [r["class"] for r in rows[:6]] == [str(c) for c in build_table(4, False).class_list]
    assert "chi2" in report.to_text()


def test_row_count_mismatch():
    m = count_motifs(generate_gnp(GnpParams(20, 0.2, True, 1)), 3)
    with pytest.raises(ValueError, match="rows"):
        compare_to_theory(m, GnpParams(21, 0.2, True))
