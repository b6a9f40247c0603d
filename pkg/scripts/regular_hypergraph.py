"""
Extreme H-eigenvalues on a 2-regular 4-uniform hypergraph.

The signless Laplacian should have spectral radius 2d = 4 and the adjacency
tensor d = 2. The smallest adjacency H-eigenvalue is printed for reference.
"""

import argparse

import numpy as np

from tenseig import HypergraphTensor, SolverConfig, UniformHypergraph, solve_extreme

EDGES = [[1, 2, 3, 4], [3, 4, 5, 6], [5, 6, 1, 2]]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--starts", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    g = UniformHypergraph(6, np.array(EDGES))
    cfg = SolverConfig(seed=args.seed)
    for kind, extreme in (("signless", "max"), ("adjacency", "max"), ("adjacency", "min")):
        best, reps = solve_extreme(HypergraphTensor(g, kind), "h", extreme, args.starts, cfg)
        iters = sum(r.iterations for r in reps)
        secs = sum(r.seconds for r in reps)
        print(f"{kind:>9} H-{extreme}: {best.eigenvalue: .4f}  iters {iters}  time {secs:.2f}s")


if __name__ == "__main__":
    main()
