"""Time the counting stage on fixed-degree G(n, p) graphs and write a CSV.

    python3 scripts/run_scaling.py --ns 1000 10000 100000 --workers 1 2 4 -o bench.csv
"""

import argparse
import sys

from localmotifs.bench import fixed_degree_series, run_scaling_suite, write_bench_csv


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ns", type=int, nargs="+", default=[10**3, 10**4, 10**5])
    ap.add_argument("--degree", type=float, default=10.0)
    ap.add_argument("--k", type=int, choices=(3, 4), default=3)
    ap.add_argument("--workers", type=int, nargs="+", default=[1, 4])
    ap.add_argument("--undirected", action="store_true")
    ap.add_argument("--granularity", choices=("root", "root-neighbor"), default="root")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("-o", "--output", help="CSV path (default stdout)")
    args = ap.parse_args(argv)

    grid = fixed_degree_series(args.ns, args.degree, not args.undirected, args.seed)
    points = run_scaling_suite(grid, args.k, args.workers, args.repeats, args.granularity)
    for pt in points:
        print(f"n={pt.n} workers={pt.workers} seconds={pt.seconds:.4f} "
              f"ns/motif={pt.seconds_per_motif * 1e9:.2f}", file=sys.stderr)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            write_bench_csv(fh, points)
    else:
        write_bench_csv(sys.stdout, points)


if __name__ == "__main__":
    main()
