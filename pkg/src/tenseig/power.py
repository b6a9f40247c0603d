"""Shifted symmetric higher-order power method (SS-HOPM) for Z-eigenpairs."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .acrcet import EigenReport, Status, best_of, multistart
from .objective import Metric, ObjectiveContext, residual
from .subproblem import estimate_norm


@dataclass(frozen=True)
class PowerConfig:
    """
    ``shift=None`` re-estimates the shift every iteration as
    ``1.1 * (r-1) * rho(A x^{r-2})`` with a 5-step power iteration; a number
    fixes it. ``concave=True`` looks for the smallest eigenvalue.
    """

    shift: float | None = None
    tol: float = 1e-13
    max_iter: int = 10000
    concave: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.shift is not None and not np.isfinite(self.shift):
            raise ValueError("fixed shift must be finite")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


def adaptive_shift(tensor, x: np.ndarray) -> float:
    m = tensor.txr2(x)
    v0 = np.ones(x.size) + x
    rho = estimate_norm(lambda v: m @ v, v0, steps=5)
    return 1.1 * max(0.0, (tensor.order - 1) * rho)


def sshopm(tensor, x0, cfg: PowerConfig = PowerConfig()) -> EigenReport:
    """
    Iterate ``x <- normalize(A x^{r-1} + shift x)`` (on ``-A`` when concave).

    Stops when successive values ``A x^r`` differ by at most ``cfg.tol``.
    The trace holds the value sequence, which is non-decreasing for ``A``
    (non-increasing for the concave case) once the shift is large enough.
    """
    t0 = time.perf_counter()
    if tensor.order % 2:
        raise ValueError("SS-HOPM here needs an even-order tensor")
    work = -tensor if cfg.concave else tensor
    x = np.asarray(x0, dtype=np.float64)
    if abs(np.linalg.norm(x) - 1.0) > 1e-8:
        raise ValueError("start vector must lie on the unit sphere")
    x = x / np.linalg.norm(x)
    lam = work.txr(x)
    trace = [lam]
    status = Status.MAX_ITER
    it = 0
    for it in range(1, cfg.max_iter + 1):
        shift = adaptive_shift(work, x) if cfg.shift is None else cfg.shift
        y = work.txr1(x) + shift * x
        ny = np.linalg.norm(y)
        if ny == 0.0:
            status = Status.STALLED
            break
        x = y / ny
        new = work.txr(x)
        trace.append(new)
        done = abs(new - lam) <= cfg.tol
        lam = new
        if done:
            status = Status.CONVERGED
            break
    sign = -1.0 if cfg.concave else 1.0
    eig = sign * lam
    ctx = ObjectiveContext(tensor, Metric.Z)
    return EigenReport(
        eigenvalue=eig,
        eigenvector=x,
        spectrum="z",
        extreme="min" if cfg.concave else "max",
        residual=residual(ctx, x, eig),
        status=status,
        iterations=it,
        trace=[sign * v for v in trace],
        seconds=time.perf_counter() - t0,
    )


def power_extreme(tensor, extreme: str = "max", starts: int = 100, cfg: PowerConfig | None = None,
                  threads: int = 1):
    """Best-of-``starts`` SS-HOPM Z-eigenvalue; returns ``(best, reports)``."""
    if extreme not in ("min", "max"):
        raise ValueError("extreme must be 'min' or 'max'")
    cfg = cfg or PowerConfig()
    cfg = PowerConfig(cfg.shift, cfg.tol, cfg.max_iter, extreme == "min", cfg.seed)
    reports = multistart(lambda x0: sshopm(tensor, x0, cfg), tensor.dim, starts, cfg.seed, threads)
    return best_of(reports, extreme), reports
