"""Smallest Z-eigenvalue of the two-dimensional example A(alpha), best of N starts, for both solvers."""

import argparse

from tenseig import PowerConfig, SolverConfig, power_extreme, qi_example, solve_extreme


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--starts", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'alpha':>6} {'solver':>7} {'lambda_min':>12} {'iters':>7} {'time(s)':>8}")
    for alpha in (0.0, 10.0, 100.0):
        t = qi_example(alpha)
        for name in ("power", "acrcet"):
            if name == "power":
                best, reps = power_extreme(t, "min", args.starts, PowerConfig(seed=args.seed))
            else:
                best, reps = solve_extreme(t, "z", "min", args.starts, SolverConfig(seed=args.seed))
            iters = sum(r.iterations for r in reps)
            secs = sum(r.seconds for r in reps)
            print(f"{alpha:6g} {name:>7} {best.eigenvalue:12.4f} {iters:7d} {secs:8.2f}")


if __name__ == "__main__":
    main()
