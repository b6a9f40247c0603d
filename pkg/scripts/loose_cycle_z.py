"""Largest Z-eigenvalue of the signless Laplacian of 4-uniform loose cycles as m grows."""

import argparse

from tenseig import HypergraphTensor, SolverConfig, generate_loose_cycle, solve_extreme


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, nargs="+", default=[3, 6, 12, 24, 48, 96])
    ap.add_argument("--starts", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    cfg = SolverConfig(seed=args.seed)
    print(f"{'n':>6} {'m':>5} {'lambda_max':>11} {'iters':>6} {'time(s)':>8}")
    for m in args.m:
        g = generate_loose_cycle(4, m)
        best, reps = solve_extreme(HypergraphTensor(g, "signless"), "z", "max", args.starts, cfg, args.threads)
        print(f"{g.n:6d} {m:5d} {best.eigenvalue:11.6f} {sum(r.iterations for r in reps):6d} "
              f"{sum(r.seconds for r in reps):8.2f}")


if __name__ == "__main__":
    main()
