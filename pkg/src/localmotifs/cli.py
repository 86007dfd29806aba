"""Command line entry point: ``localmotifs {count,gnp-validate,oracle-check,classes}``."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .enumerator import total_motif_census
from .graph import GraphInputError, build_csr, load_edge_list
from .io import space_name, write_counts_csv
from .motif_index import build_table
from .oracle import OracleCapError, brute_force_count
from .parallel import GRANULARITIES, count_local_motifs, default_workers
from .random_theory import GnpParams, compare_to_theory, generate_gnp

EXIT_OK = 0
EXIT_INPUT = 3
EXIT_VALIDATION = 4
EXIT_MISMATCH = 5
EXIT_CAP = 6

log = logging.getLogger("localmotifs")


@dataclass
class RunConfig:
    subcommand: str
    input: Optional[str] = None
    directed: bool = True
    k: int = 3
    workers: Optional[int] = None
    granularity: str = "root"
    output: Optional[str] = None
    seed: int = 0
    n: Optional[int] = None
    p: Optional[float] = None
    compare_p: Optional[float] = None
    alpha: float = 0.05
    skip_self_loops: bool = False


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", newline="")


def _load(cfg: RunConfig):
    el = load_edge_list(cfg.input, cfg.directed,
                        self_loops="skip" if cfg.skip_self_loops else "reject")
    return el, build_csr(el)


def cmd_count(cfg: RunConfig) -> int:
    el, g = _load(cfg)
    if g.num_vertices == 0:
        log.warning("%s: no edges, writing an empty table", cfg.input)
    t0 = time.perf_counter()
    m = count_local_motifs(g, cfg.k, cfg.workers, cfg.granularity)
    elapsed = time.perf_counter() - t0
    out = _open_out(cfg.output)
    try:
        write_counts_csv(out, m, el.original_ids)
    finally:
        if out is not sys.stdout:
            out.close()
    totals = total_motif_census(m)
    print(f"space={space_name(m)} vertices={g.num_vertices} edges={g.num_edges} "
          f"seconds={elapsed:.3f}", file=sys.stderr)
    for cls, total in totals.items():
        print(f"  class {cls}: {total}", file=sys.stderr)
    return EXIT_OK


def cmd_gnp_validate(cfg: RunConfig) -> int:
    if cfg.n is None or cfg.p is None:
        raise SystemExit("gnp-validate needs --n and --p")
    params = GnpParams(cfg.n, cfg.p, cfg.directed, cfg.seed)
    theory = GnpParams(cfg.n, cfg.p if cfg.compare_p is None else cfg.compare_p,
                       cfg.directed, cfg.seed)
    g = generate_gnp(params)
    m = count_local_motifs(g, cfg.k, cfg.workers, cfg.granularity)
    report = compare_to_theory(m, theory, alpha=cfg.alpha)
    print(report.to_text())
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(report.to_csv())
    return EXIT_VALIDATION if report.flagged or report.chi2_significant else EXIT_OK


def cmd_oracle_check(cfg: RunConfig) -> int:
    if cfg.input:
        _, g = _load(cfg)
        label = cfg.input
    elif cfg.n is not None and cfg.p is not None:
        g = generate_gnp(GnpParams(cfg.n, cfg.p, cfg.directed, cfg.seed))
        label = f"G({cfg.n}, {cfg.p}) seed {cfg.seed}"
    else:
        raise SystemExit("oracle-check needs an input file or --n and --p")
    table = build_table(cfg.k, g.directed)
    try:
        ref = brute_force_count(g, cfg.k, table).counts
    except OracleCapError as exc:
        print(f"oracle-check: {exc}; use a smaller graph", file=sys.stderr)
        return EXIT_CAP
    got = count_local_motifs(g, cfg.k, cfg.workers, cfg.granularity, table)
    diff = np.argwhere(got.counts != ref.counts)
    if len(diff):
        v, j = diff[0]
        print(f"MISMATCH on {label}: vertex {v}, class {int(ref.columns[j])}: "
              f"enumerator {int(got.counts[v, j])}, brute force {int(ref.counts[v, j])} "
              f"({len(diff)} differing cells)")
        return EXIT_MISMATCH
    print(f"PASS {label}: {g.num_vertices} vertices, k={cfg.k}, "
          f"{int(ref.counts.sum()) // cfg.k} motifs")
    return EXIT_OK


def cmd_classes(cfg: RunConfig) -> int:
    table = build_table(cfg.k, cfg.directed)
    out = _open_out(cfg.output)
    try:
        out.write(f"# space={table.space} classes={table.num_classes}\n")
        out.write("index,edges,isomorphs\n")
        for c, e, iso in zip(table.class_list, table.n_edges_of_class, table.n_iso_of_class):
            out.write(f"{int(c)},{int(e)},{int(iso)}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


COMMANDS = {
    "count": cmd_count,
    "gnp-validate": cmd_gnp_validate,
    "oracle-check": cmd_oracle_check,
    "classes": cmd_classes,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="localmotifs",
                                     description="Per-vertex 3/4-motif counting.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, with_input=False, input_optional=False):
        if with_input:
            p.add_argument("input", nargs="?" if input_optional else None,
                           help="edge list: one 'src dst' per line")
        d = p.add_mutually_exclusive_group()
        d.add_argument("--directed", dest="directed", action="store_true", default=True)
        d.add_argument("--undirected", dest="directed", action="store_false")
        p.add_argument("--k", type=int, choices=(3, 4), default=3)
        p.add_argument("--output", "-o")

    def runtime(p):
        p.add_argument("--workers", type=int, default=None,
                       help=f"worker threads (default: {default_workers()})")
        p.add_argument("--granularity", choices=GRANULARITIES, default="root")

    def gnp(p):
        p.add_argument("--n", type=int)
        p.add_argument("--p", type=float)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("count", help="count motifs of an edge-list file")
    common(p, with_input=True)
    runtime(p)
    p.add_argument("--skip-self-loops", action="store_true")

    p = sub.add_parser("gnp-validate", help="compare G(n,p) counts with theory")
    common(p)
    runtime(p)
    gnp(p)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--compare-p", type=float, default=None,
                   help="edge probability of the theory (default: --p)")

    p = sub.add_parser("oracle-check", help="diff the enumerator against brute force")
    common(p, with_input=True, input_optional=True)
    runtime(p)
    gnp(p)
    p.add_argument("--skip-self-loops", action="store_true")

    p = sub.add_parser("classes", help="list the connected motif classes")
    common(p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    fields = {f: getattr(args, f) for f in RunConfig.__dataclass_fields__ if hasattr(args, f)}
    cfg = RunConfig(**fields)
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except GraphInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
