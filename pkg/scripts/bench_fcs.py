"""
Timing of T x^{r-2} for generated 4-uniform hypergraphs: edge-wise kernel
versus dense contraction. Writes CSV for plotting.
"""

import argparse
import csv
import sys

from tenseig.cli import bench_fcs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=["flower", "loose-cycle"], default="flower")
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 150, 1000, 5000, 20000])
    ap.add_argument("--naive-max", type=int, default=150)
    ap.add_argument("-o", "--output")
    args = ap.parse_args()

    rows = bench_fcs(args.family, args.sizes, naive_max=args.naive_max)
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    w = csv.DictWriter(out, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    if args.output:
        out.close()


if __name__ == "__main__":
    main()
