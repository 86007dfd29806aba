"""CSV files for per-vertex motif counts.

Layout::

    # space=directed-k3
    vertex,3,6,7,...
    10,0,4,1,...

The first line names the index space; the header lists the canonical
motif indices; rows are keyed by the user's original vertex ids.
"""

from __future__ import annotations

import csv
import re
from typing import TextIO

import numpy as np

from .enumerator import CountMatrix

_SPACE_RE = re.compile(r"#\s*space=(directed|undirected)-k(\d)")


def space_name(m: CountMatrix) -> str:
    return f"{'directed' if m.directed else 'undirected'}-k{m.k}"


def write_counts_csv(fh: TextIO, m: CountMatrix, vertex_ids=None) -> None:
    if vertex_ids is None:
        vertex_ids = np.arange(m.num_vertices)
    fh.write(f"# space={space_name(m)}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["vertex"] + [str(int(c)) for c in m.columns])
    for vid, row in zip(vertex_ids, m.counts):
        w.writerow([int(vid)] + row.tolist())


def read_counts_csv(fh: TextIO) -> tuple[np.ndarray, CountMatrix]:
    """Inverse of :func:`write_counts_csv`: returns (vertex ids, matrix)."""
    first = fh.readline()
    match = _SPACE_RE.match(first.strip())
    if not match:
        raise ValueError(f"missing '# space=...' line, got {first!r}")
    directed, k = match.group(1) == "directed", int(match.group(2))
    reader = csv.reader(fh)
    header = next(reader)
    if not header or header[0] != "vertex":
        raise ValueError(f"bad header {header!r}")
    columns = np.array([int(c) for c in header[1:]], dtype=np.int64)
    rows = [[int(x) for x in r] for r in reader if r]
    data = np.array(rows, dtype=np.int64).reshape(-1, len(columns) + 1)
    m = CountMatrix(data[:, 1:].copy(), k, directed, columns, "canonical")
    return data[:, 0].copy(), m
