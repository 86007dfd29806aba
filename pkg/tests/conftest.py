import itertools
import os

import hypothesis
import networkx as nx
import numpy as np
import pytest

from localmotifs.graph import EdgeList, build_csr
from localmotifs.motif_index import pair_order

hypothesis.settings.register_profile("ci", max_examples=40, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=400, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))


def graph_from_edges(edges, directed, n=None):
    return build_csr(EdgeList.from_pairs(edges, directed, n))


def random_graph(n, p, directed, seed):
    rng = np.random.default_rng(seed)
    adj = rng.random((n, n)) < p
    np.fill_diagonal(adj, False)
    if not directed:
        adj = np.triu(adj)
    return build_csr(EdgeList(np.argwhere(adj), directed, n))


def clique(n, directed=False):
    pairs = itertools.permutations(range(n), 2) if directed else itertools.combinations(range(n), 2)
    return graph_from_edges(list(pairs), directed, n)


def path(n, directed=False):
    return graph_from_edges([(i, i + 1) for i in range(n - 1)], directed, n)


def cycle(n, directed=False):
    return graph_from_edges([(i, (i + 1) % n) for i in range(n)], directed, n)


def star(n_leaves, directed=False, center=0):
    leaves = [v for v in range(n_leaves + 1) if v != center]
    return graph_from_edges([(center, v) for v in leaves], directed, n_leaves + 1)


def dag_grid(rows, cols):
    """Directed grid with edges pointing right and down."""
    vid = lambda r, c: r * cols + c
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    return graph_from_edges(edges, True, rows * cols)


def structured_fixtures():
    """(name, graph) pairs: cliques, paths, stars, DAG grids and cycles."""
    out = []
    for n in range(4, 8):
        out.append((f"K{n}", clique(n)))
        out.append((f"K{n}-directed", clique(n, directed=True)))
    for n in (3, 4, 6, 10):
        out.append((f"P{n}", path(n)))
        out.append((f"P{n}-directed", path(n, directed=True)))
    for leaves in (3, 5, 9):
        out.append((f"S{leaves}", star(leaves)))
        out.append((f"S{leaves}-out", star(leaves, directed=True)))
    for rows, cols in ((2, 3), (3, 3), (3, 5)):
        out.append((f"DAG{rows}x{cols}", dag_grid(rows, cols)))
    for n in range(4, 10):
        out.append((f"C{n}", cycle(n)))
        out.append((f"C{n}-directed", cycle(n, directed=True)))
    return out


def random_fixtures(count=200, seed=2024):
    """``count`` random graphs with n in [5, 30], p in {0.1, 0.3, 0.6}."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(5, 31))
        p = float(rng.choice([0.1, 0.3, 0.6]))
        directed = bool(i % 2)
        out.append((f"G({n},{p},{'d' if directed else 'u'})#{i}",
                    random_graph(n, p, directed, int(rng.integers(2**32)))))
    return out


def nx_classes(k, directed):
    """Independent class enumeration: WL hash buckets refined with VF2.

    Returns {representative raw: number of connected labeled graphs in class}.
    """
    pairs = pair_order(k, directed)
    bits = len(pairs)
    reps = {}
    for raw in range(1 << bits):
        G = nx.DiGraph() if directed else nx.Graph()
        G.add_nodes_from(range(k))
        G.add_edges_from(p for pos, p in enumerate(pairs) if raw >> (bits - 1 - pos) & 1)
        connected = nx.is_weakly_connected(G) if directed else nx.is_connected(G)
        if not connected:
            continue
        h = nx.weisfeiler_lehman_graph_hash(G)
        for rep in reps.setdefault(h, []):
            if nx.is_isomorphic(rep[0], G):
                rep[1].append(raw)
                break
        else:
            reps[h].append((G, [raw]))
    return {min(r): len(r) for bucket in reps.values() for _, r in bucket}


@pytest.fixture(scope="session")
def worked_example():
    """The directed 4-vertex example graph used for the CSR layout."""
    return EdgeList.from_pairs([(0, 1), (0, 2), (0, 3), (2, 0), (3, 1), (3, 2)], True, 4)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
