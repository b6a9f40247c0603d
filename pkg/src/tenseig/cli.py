"""
Command-line driver.

    tenseig solve --input lc46.hg --tensor laplacian --spectrum h --extreme max
    tenseig gen loose-cycle --k 4 --m 6 -o lc46.hg
    tenseig bench-fcs --family flower --sizes 50 100 150 -o fcs.csv
    tenseig oracle --alpha 0 --spectrum z

Exit codes: 0 when the best run converged, 2 when it did not, 1 on input errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .acrcet import EigenReport, SolverConfig, solve_extreme
from .hypergraph import (
    HypergraphFormatError,
    HypergraphTensor,
    Kind,
    fcs_txr2,
    generate_flower,
    generate_loose_cycle,
    load_hypergraph,
    naive_txr2,
    save_hypergraph,
)
from .oracle import circle_eigenpairs
from .power import PowerConfig, power_extreme
from .tensor import TensorFormatError, TensorSizeError, load_tensor, qi_example, save_tensor

EXIT_OK, EXIT_INPUT, EXIT_NO_CONVERGENCE = 0, 1, 2
CSV_COLUMNS = ["solver", "spectrum", "extreme", "best_lambda", "total_iters", "total_seconds"]


class InputError(Exception):
    """Bad flags or input files; reported on stderr with exit code 1."""


def _read_tensor(args):
    """Dense tensor or implicit hypergraph tensor named by ``--input``/``--alpha``."""
    if args.alpha is not None and args.tensor != "dense":
        raise InputError("--alpha requires --tensor dense")
    if args.input is None:
        if args.alpha is not None:
            return qi_example(args.alpha)
        raise InputError("one of --input or --alpha is required")
    path = Path(args.input)
    try:
        path.read_bytes()
    except OSError as exc:
        raise InputError(f"unreadable file: {path}: {exc.strerror or exc}") from exc
    try:
        if args.tensor == "dense":
            t = load_tensor(path)
        else:
            t = HypergraphTensor(load_hypergraph(path), Kind(args.tensor))
    except TensorSizeError as exc:
        raise InputError(f"dimension overflow: {exc}") from exc
    except (TensorFormatError, HypergraphFormatError, UnicodeDecodeError) as exc:
        raise InputError(f"malformed {'tensor' if args.tensor == 'dense' else 'hypergraph'} file {path}: {exc}") from exc
    if args.alpha is not None:
        ref = qi_example(args.alpha)
        if t.entries.shape != ref.entries.shape or not np.allclose(t.entries, ref.entries, rtol=1e-12, atol=0.0):
            raise InputError(f"{path} is not the example tensor A({args.alpha:g}) named by --alpha")
    return t


def _check_order(t):
    if t.order % 2:
        raise InputError(f"odd order r = {t.order}: only even-order tensors are supported")


def _start_entry(rep: EigenReport, with_trace: bool) -> dict:
    out = {
        "seed": rep.seed,
        "lambda": rep.eigenvalue,
        "residual": rep.residual,
        "status": rep.status.value,
        "iters": rep.iterations,
        "seconds": rep.seconds,
    }
    if with_trace:
        out["trace"] = [asdict(rec) if hasattr(rec, "__dataclass_fields__") else float(rec) for rec in rep.trace]
    return out


def build_report(args, best: EigenReport, reports: list[EigenReport], total_seconds: float) -> dict:
    config = {
        "solver": args.solver,
        "tensor": args.tensor,
        "spectrum": args.spectrum,
        "extreme": args.extreme,
        "starts": args.starts,
        "seed": args.seed,
        "tol": args.tol,
        "max_iter": args.max_iter,
        "sigma0": args.sigma0,
        "threads": args.threads,
        "input": args.input,
        "alpha": args.alpha,
    }
    return {
        "config": config,
        "starts": [_start_entry(rep, args.trace) for rep in reports],
        "best": {
            "lambda": best.eigenvalue,
            "vector": best.eigenvector.tolist(),
            "residual": best.residual,
            "status": best.status.value,
            "seed": best.seed,
        },
        "total_iters": sum(rep.iterations for rep in reports),
        "total_seconds": total_seconds,
    }


def cmd_solve(args) -> int:
    t = _read_tensor(args)
    _check_order(t)
    if args.starts < 1 or args.threads < 1:
        raise InputError("--starts and --threads must be at least 1")
    t0 = time.perf_counter()
    if args.solver == "acrcet":
        try:
            cfg = SolverConfig(
                sigma0=args.sigma0,
                grad_tol=args.tol if args.tol is not None else SolverConfig.grad_tol,
                max_iter=args.max_iter if args.max_iter is not None else SolverConfig.max_iter,
                seed=args.seed,
            )
        except ValueError as exc:
            raise InputError(f"invalid solver settings: {exc}") from exc
        best, reports = solve_extreme(t, args.spectrum, args.extreme, args.starts, cfg, args.threads,
                                      keep_trace=args.trace)
    else:
        if args.spectrum != "z":
            raise InputError("the power baseline computes Z-eigenvalues only; use --spectrum z")
        try:
            cfg = PowerConfig(
                tol=args.tol if args.tol is not None else PowerConfig.tol,
                max_iter=args.max_iter if args.max_iter is not None else PowerConfig.max_iter,
                seed=args.seed,
            )
        except ValueError as exc:
            raise InputError(f"invalid solver settings: {exc}") from exc
        best, reports = power_extreme(t, args.extreme, args.starts, cfg, args.threads)
    total = time.perf_counter() - t0
    report = build_report(args, best, reports, total)

    if args.out_json:
        Path(args.out_json).write_text(json.dumps(report, indent=1))
    if args.out_csv:
        with open(args.out_csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            w.writerow([args.solver, args.spectrum, args.extreme, repr(best.eigenvalue),
                        report["total_iters"], f"{total:.6f}"])
    if args.out_starts_csv:
        with open(args.out_starts_csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["seed", "lambda", "residual", "status", "iters", "seconds"])
            for rep in reports:
                w.writerow([rep.seed, repr(rep.eigenvalue), repr(rep.residual), rep.status.value,
                            rep.iterations, f"{rep.seconds:.6f}"])

    nconv = sum(rep.converged for rep in reports)
    print(f"{args.solver} {args.spectrum}-{args.extreme}: lambda = {best.eigenvalue:.10f}  "
          f"residual = {best.residual:.2e}  converged {nconv}/{len(reports)}  "
          f"iters {report['total_iters']}  time {total:.2f}s")
    return EXIT_OK if best.converged else EXIT_NO_CONVERGENCE


def cmd_gen(args) -> int:
    try:
        if args.family == "flower":
            save_hypergraph(generate_flower(args.petals, args.k), args.output)
        elif args.family == "loose-cycle":
            save_hypergraph(generate_loose_cycle(args.k, args.m), args.output)
        else:
            save_tensor(qi_example(args.alpha), args.output)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    except OSError as exc:
        raise InputError(f"cannot write {args.output}: {exc.strerror or exc}") from exc
    print(args.output)
    return EXIT_OK


def _bench_graph(family: str, n: int, k: int):
    if family == "flower":
        return generate_flower(max(1, round((n - 2) / (k - 2))), k)
    return generate_loose_cycle(k, max(3, round(n / (k - 1))))


def _best_time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_fcs(family: str, sizes, k: int = 4, naive_max: int = 150, repeats: int = 3, seed: int = 0):
    """
    Time ``fcs_txr2`` and, for ``n <= naive_max``, the dense naive contraction
    on generated adjacency tensors.

    :returns: list of dicts with keys n, fcs_seconds, naive_seconds, max_abs_diff
    """
    rows = []
    for size in sizes:
        g = _bench_graph(family, size, k)
        t = HypergraphTensor(g, Kind.ADJACENCY)
        x = np.random.default_rng([seed, g.n]).standard_normal(g.n)
        x /= np.linalg.norm(x)
        fcs = fcs_txr2(t, x)
        row = {"n": g.n, "fcs_seconds": _best_time(lambda: fcs_txr2(t, x), repeats),
               "naive_seconds": float("nan"), "max_abs_diff": float("nan")}
        if g.n <= naive_max:
            naive = naive_txr2(t, x)
            dense = fcs.toarray() if hasattr(fcs, "toarray") else fcs
            row["max_abs_diff"] = float(np.max(np.abs(naive - dense)))
            row["naive_seconds"] = _best_time(lambda: naive_txr2(t, x), repeats)
        rows.append(row)
    return rows


def cmd_bench(args) -> int:
    try:
        rows = bench_fcs(args.family, args.sizes, args.k, args.naive_max, args.repeats, args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        w = csv.DictWriter(out, fieldnames=["n", "fcs_seconds", "naive_seconds", "max_abs_diff"])
        w.writeheader()
        w.writerows(rows)
    finally:
        if args.output:
            out.close()
    return EXIT_OK


def cmd_oracle(args) -> int:
    args.tensor = "dense"
    t = _read_tensor(args)
    if t.dim != 2:
        raise InputError(f"the oracle enumerates n = 2 tensors only, got n = {t.dim}")
    _check_order(t)
    pairs = circle_eigenpairs(t, args.spectrum, args.grid)
    out = [{"lambda": lam, "vector": x.tolist()} for lam, x in pairs]
    text = json.dumps(out, indent=1)
    if args.output:
        Path(args.output).write_text(text)
    for lam, x in pairs:
        print(f"{lam:.12f}  [{x[0]: .12f}, {x[1]: .12f}]")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tenseig", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="best-of-N extreme eigenvalue")
    s.add_argument("--input")
    s.add_argument("--tensor", choices=["adjacency", "laplacian", "signless", "dense"], default="dense")
    s.add_argument("--spectrum", choices=["h", "z"], default="z")
    s.add_argument("--extreme", choices=["min", "max"], default="max")
    s.add_argument("--solver", choices=["acrcet", "power"], default="acrcet")
    s.add_argument("--starts", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, help="gradient tolerance (ACRCET) or value tolerance (power)")
    s.add_argument("--max-iter", type=int)
    s.add_argument("--sigma0", type=float, default=1.0)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--alpha", type=float, help="the two-dimensional example tensor A(alpha); with --input, the file must hold it")
    s.add_argument("--out-json")
    s.add_argument("--out-csv")
    s.add_argument("--out-starts-csv", help="one row per start")
    s.add_argument("--trace", action=argparse.BooleanOptionalAction, default=True,
                   help="include per-iteration traces in the JSON report")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("gen", help="write a generated hypergraph or example tensor")
    g.add_argument("family", choices=["flower", "loose-cycle", "qi-example1"])
    g.add_argument("--k", type=int, default=4)
    g.add_argument("--m", type=int, default=3)
    g.add_argument("--petals", type=int, default=3)
    g.add_argument("--alpha", type=float, default=0.0)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench-fcs", help="time T x^{r-2}: edge-wise versus dense")
    b.add_argument("--family", choices=["flower", "loose-cycle"], default="flower")
    b.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 150])
    b.add_argument("--k", type=int, default=4)
    b.add_argument("--naive-max", type=int, default=150)
    b.add_argument("--repeats", type=int, default=3)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bench)

    o = sub.add_parser("oracle", help="all eigenpairs of an n = 2 tensor")
    o.add_argument("--input")
    o.add_argument("--alpha", type=float)
    o.add_argument("--spectrum", choices=["h", "z"], default="z")
    o.add_argument("--grid", type=int, default=10**6)
    o.add_argument("-o", "--output")
    o.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
