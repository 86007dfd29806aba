"""G(n, p) generation, expected local motif counts and a goodness-of-fit report.

Random numbers come from numpy's PCG64 bit generator seeded with
``GnpParams.seed``.

The expected number of k-motifs of class m containing a vertex is

    C(n-1, k-1) * N_iso(m) * p**e(m) * (1-p)**(n_max(k) - e(m))

which is exact in expectation. Counts of different vertices (and of
different classes) are strongly dependent, so the test statistics below use
the exact covariance of the graph-level class totals under G(n, p) rather
than a Poisson variance. Two k-sets that share j >= 2 vertices share the
state of the j-vertex subgraph between them; conditioning on that state
makes the rest of the two sets independent, which gives

    Cov(T_m, T_m') = sum_j N_j * sum_s P(s) (a_m(s) - P_m) (a_m'(s) - P_m')

with N_j the number of ordered pairs of k-sets meeting in j vertices and
a_m(s) = P(set is of class m | shared subgraph is s).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from math import comb
from typing import Optional

import numpy as np
from scipy import stats

from .enumerator import CountMatrix, merge_isomorphs
from .graph import CsrGraph, EdgeList, build_csr
from .motif_index import (MotifIndexTable, build_table, decode, encode_matrix,
                          n_max)

MIN_EXPECTED = 5.0


@dataclass(frozen=True)
class GnpParams:
    n: int
    p: float
    directed: bool
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")


def num_pairs(n: int, directed: bool) -> int:
    return n * (n - 1) if directed else comb(n, 2)


def generate_gnp(params: GnpParams) -> CsrGraph:
    """Sample G(n, p): edge count from the binomial, then a uniform set of pairs."""
    n, p = params.n, params.p
    rng = np.random.Generator(np.random.PCG64(params.seed))
    total = num_pairs(n, params.directed)
    m = int(rng.binomial(total, p)) if total else 0
    idx = np.sort(rng.choice(total, size=m, replace=False)) if m else np.zeros(0, np.int64)
    idx = idx.astype(np.int64)
    if params.directed:
        src = idx // (n - 1)
        rest = idx % (n - 1)
        dst = rest + (rest >= src)
    else:
        # row u of the upper triangle starts at u*(2n-u-1)/2
        rows = np.arange(n, dtype=np.int64)
        starts = rows * (2 * n - rows - 1) // 2
        src = np.searchsorted(starts, idx, side="right") - 1
        dst = src + 1 + idx - starts[src]
    return build_csr(EdgeList(np.stack([src, dst], axis=1), params.directed, n))


def expected_count(k: int, cls: int, params: GnpParams,
                   table: Optional[MotifIndexTable] = None) -> float:
    """Expected number of class-``cls`` k-motifs containing a given vertex."""
    table = table or build_table(k, params.directed)
    j = table.class_position(cls)
    return _expected_vector(table, params)[j]


def _expected_vector(table: MotifIndexTable, params: GnpParams) -> np.ndarray:
    k, p = table.k, params.p
    e = table.n_edges_of_class
    nm = n_max(k, table.directed)
    return (comb(params.n - 1, k - 1) * table.n_iso_of_class
            * np.power(p, e) * np.power(1.0 - p, nm - e))


@dataclass
class ExpectedProfile:
    """Per-vertex expected count of every connected class (same for all vertices)."""

    classes: np.ndarray
    expected: np.ndarray
    params: GnpParams
    k: int


def expected_profile(k: int, params: GnpParams,
                     table: Optional[MotifIndexTable] = None) -> ExpectedProfile:
    table = table or build_table(k, params.directed)
    return ExpectedProfile(table.class_list.copy(), _expected_vector(table, params), params, k)


def class_probabilities(table: MotifIndexTable, p: float) -> np.ndarray:
    """Probability that a fixed k-set induces each connected class."""
    return table.n_iso_of_class * np.power(p, table.n_edges_of_class) * np.power(
        1.0 - p, table.bits - table.n_edges_of_class)


def total_covariance(table: MotifIndexTable, params: GnpParams) -> np.ndarray:
    """Exact covariance matrix of the graph-level class totals under G(n, p)."""
    k, directed, p = table.k, table.directed, params.p
    n = params.n
    q = 1.0 - p
    col = table.column_of_raw()
    raws = np.nonzero(col >= 0)[0]
    cls = col[raws]
    adj = decode(raws, k, directed)
    e_r = adj.sum(axis=(1, 2)) // (1 if directed else 2)
    P = class_probabilities(table, p)
    ncls = table.num_classes
    cov = np.zeros((ncls, ncls))
    n_sets = comb(n, k)
    for j in range(2, k + 1):
        n_pairs = n_sets * comb(k, j) * comb(n - k, k - j)
        if n_pairs == 0:
            continue
        sub = adj[:, :j, :j]
        s = encode_matrix(sub, directed)
        e_s = sub.sum(axis=(1, 2)) // (1 if directed else 2)
        nstates = 1 << n_max(j, directed)
        free = table.bits - n_max(j, directed)
        w = np.power(p, e_r - e_s) * np.power(q, free - (e_r - e_s))
        a = np.zeros((nstates, ncls))
        np.add.at(a, (s, cls), w)
        states = np.arange(nstates)
        e_state = decode(states, j, directed).sum(axis=(1, 2)) // (1 if directed else 2)
        p_state = np.power(p, e_state) * np.power(q, n_max(j, directed) - e_state)
        dev = a - P[None, :]
        cov += n_pairs * (dev.T * p_state) @ dev
    return cov


@dataclass
class ClassRow:
    label: str
    observed_mean: float
    expected: float
    z: float
    tested: bool
    flagged: bool


@dataclass
class ComparisonReport:
    """Observed vs expected per-vertex counts for one graph.

    ``rows`` has one entry per connected class plus a final ``pooled`` row
    for the classes whose expected count is below ``MIN_EXPECTED``. Only
    tested rows (expected >= ``MIN_EXPECTED``) enter the chi-square and can be
    flagged; a row is flagged when its two-sided p-value is below
    ``alpha / number of tested rows``.
    """

    params: GnpParams
    k: int
    alpha: float
    rows: list[ClassRow]
    chi2: float
    dof: int
    p_value: float
    space: str = ""
    notes: list[str] = field(default_factory=list)

    @property
    def flagged(self) -> list[ClassRow]:
        return [r for r in self.rows if r.flagged]

    @property
    def chi2_significant(self) -> bool:
        return self.p_value < self.alpha

    def to_text(self) -> str:
        pr = self.params
        lines = [
            f"G(n={pr.n}, p={pr.p}, {'directed' if pr.directed else 'undirected'}, "
            f"seed={pr.seed}), k={self.k}, space={self.space}",
            f"{'class':>8} {'observed':>14} {'expected':>14} {'z':>9}  status",
        ]
        for r in self.rows:
            status = "FLAGGED" if r.flagged else ("ok" if r.tested else "untested")
            lines.append(f"{r.label:>8} {r.observed_mean:14.4f} {r.expected:14.4f} "
                         f"{r.z:9.3f}  {status}")
        lines.append(f"chi2 = {self.chi2:.3f} on {self.dof} dof, p = {self.p_value:.4g} "
                     f"({'significant' if self.chi2_significant else 'not significant'} "
                     f"at alpha = {self.alpha})")
        lines.extend(self.notes)
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["class", "observed_mean", "expected", "z", "flagged"])
        for r in self.rows:
            w.writerow([r.label, repr(r.observed_mean), repr(r.expected), repr(r.z),
                        int(r.flagged)])
        return buf.getvalue()


def _zscore(dev, sd):
    if sd > 0:
        return dev / sd
    if abs(dev) <= 1e-9 * max(1.0, abs(dev)):
        return 0.0
    return float(np.copysign(np.inf, dev))


def compare_to_theory(m: CountMatrix, params: GnpParams,
                      table: Optional[MotifIndexTable] = None,
                      alpha: float = 0.05) -> ComparisonReport:
    """Compare observed per-vertex mean counts with their G(n, p) expectation."""
    table = table or build_table(m.k, m.directed)
    if m.space == "raw":
        m = merge_isomorphs(m, table)
    n = m.num_vertices
    if n != params.n:
        raise ValueError(f"count matrix has {n} rows, params describe n={params.n}")
    k = m.k
    observed = m.counts.sum(axis=0) / n
    expected = _expected_vector(table, params)
    cov = total_covariance(table, params) * (k / n) ** 2

    big = expected >= MIN_EXPECTED
    small = ~big
    # buckets: tested classes individually, then the pooled remainder
    agg = [np.eye(len(expected))[i] for i in np.nonzero(big)[0]]
    labels = [str(int(c)) for c in table.class_list[big]]
    if small.any():
        agg.append(small.astype(float))
        labels.append("pooled")
    agg = np.array(agg).reshape(-1, len(expected))
    b_obs, b_exp = agg @ observed, agg @ expected
    b_cov = agg @ cov @ agg.T
    b_tested = b_exp >= MIN_EXPECTED

    class_z = {}
    for i, c in enumerate(table.class_list):
        class_z[int(c)] = _zscore(observed[i] - expected[i], float(np.sqrt(max(cov[i, i], 0.0))))
    bucket_z = np.array([_zscore(b_obs[i] - b_exp[i], float(np.sqrt(max(b_cov[i, i], 0.0))))
                         for i in range(len(b_obs))])
    n_tested = int(b_tested.sum())
    threshold = stats.norm.isf(alpha / (2 * max(n_tested, 1)))
    bucket_flag = b_tested & (np.abs(bucket_z) > threshold)

    chi2, dof = _mahalanobis(b_obs[b_tested] - b_exp[b_tested], b_cov[np.ix_(b_tested, b_tested)])
    p_value = float(stats.chi2.sf(chi2, dof)) if dof > 0 else (0.0 if chi2 > 0 else 1.0)

    rows = []
    bucket_of = {lab: i for i, lab in enumerate(labels)}
    for i, c in enumerate(table.class_list):
        lab = str(int(c))
        b = bucket_of.get(lab)
        rows.append(ClassRow(lab, float(observed[i]), float(expected[i]), class_z[int(c)],
                             tested=b is not None and bool(b_tested[b]),
                             flagged=b is not None and bool(bucket_flag[b])))
    if "pooled" in bucket_of:
        b = bucket_of["pooled"]
        rows.append(ClassRow("pooled", float(b_obs[b]), float(b_exp[b]), float(bucket_z[b]),
                             tested=bool(b_tested[b]), flagged=bool(bucket_flag[b])))
    return ComparisonReport(params, k, alpha, rows, chi2, dof, p_value, space=table.space)


def _mahalanobis(dev: np.ndarray, cov: np.ndarray) -> tuple[float, int]:
    """Quadratic form dev' cov^-1 dev over the non-degenerate directions.

    Deviations along zero-variance directions make the statistic infinite.
    """
    if len(dev) == 0:
        return 0.0, 0
    sd = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    zero = sd <= 0
    if zero.any():
        if np.any(np.abs(dev[zero]) > 1e-9 * np.maximum(1.0, np.abs(dev[zero]))):
            return float("inf"), int((~zero).sum()) or 1
        dev, cov, sd = dev[~zero], cov[np.ix_(~zero, ~zero)], sd[~zero]
        if len(dev) == 0:
            return 0.0, 0
    corr = cov / np.outer(sd, sd)
    z = dev / sd
    vals, vecs = np.linalg.eigh(corr)
    keep = vals > 1e-10 * vals.max()
    proj = vecs[:, keep].T @ z
    return float(np.sum(proj ** 2 / vals[keep])), int(keep.sum())
