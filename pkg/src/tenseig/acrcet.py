"""
Adaptive cubic regularization on the unit sphere.

Each iteration builds the cubic model from the gradient and the tangent-projected
Hessian, solves it inexactly for a trial step ``p``, and walks the curve
``alpha -> Q(alpha) x`` given by the Cayley transform of the skew matrix
``alpha/2 (x p^T - p x^T)``. ``alpha`` is backtracked by ``gamma1`` until the
ratio of actual to predicted reduction reaches ``eta1``; sigma is then updated
from that ratio and whether the full step was taken.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .objective import EvalBundle, ObjectiveContext, evaluate, residual, value_difference
from .subproblem import CubicModel, SubproblemSolution, solve

#: ``rho`` treats predicted reductions at or below this as failed trials.
MIN_PREDICTED = 1e-16


class Status(str, Enum):
    CONVERGED = "converged"
    MAX_ITER = "max_iter"
    STALLED = "stalled"


@dataclass(frozen=True)
class SolverConfig:
    eta1: float = 0.1
    eta2: float = 0.5
    gamma1: float = 0.25
    gamma2: float = 1.2
    gamma3: float = 2.0
    sigma0: float = 1.0
    sigma_min: float = 1e-8
    grad_tol: float = 1e-10  # scaled by max(1, |f_k|)
    max_iter: int = 500
    max_backtracks: int = 60
    max_krylov: int = 50
    seed: int = 0

    def __post_init__(self):
        if not self.gamma3 >= self.gamma2 > 1 > self.gamma1 > 0:
            raise ValueError("need gamma3 >= gamma2 > 1 > gamma1 > 0")
        if not 1 > self.eta2 >= self.eta1 > 0:
            raise ValueError("need 1 > eta2 >= eta1 > 0")
        if not (self.sigma0 > 0 and self.sigma_min > 0):
            raise ValueError("sigma0 and sigma_min must be positive")
        if self.grad_tol <= 0 or self.max_iter < 0 or self.max_backtracks < 0:
            raise ValueError("tolerances and iteration caps must be positive")


@dataclass
class IterationRecord:
    k: int
    f: float
    gnorm: float
    sigma: float
    alpha: float
    rho: float
    backtracks: int
    f_next: float
    actual: float  # f(x_k) - f(x_{k+1}), cancellation-free
    predicted: float  # m(0) - m(alpha p) for the accepted alpha
    model_decrease: float  # f - m(p)
    cauchy_value: float
    model_value: float
    step_norm: float
    krylov_dim: int
    used_cauchy: bool


@dataclass
class EigenReport:
    eigenvalue: float
    eigenvector: np.ndarray
    spectrum: str
    extreme: str
    residual: float
    status: Status
    iterations: int
    trace: list = field(default_factory=list)
    seconds: float = 0.0
    seed: int | None = None

    @property
    def converged(self) -> bool:
        return self.status == Status.CONVERGED


def cayley_step(x, p, alpha: float) -> np.ndarray:
    """
    ``Q(alpha) x`` in closed form, where ``Q(alpha) = (I+W)^{-1}(I-W)`` and
    ``W = alpha/2 (x p^T - p x^T)``.
    """
    x = np.asarray(x, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    px = float(p @ x)
    pp = float(p @ p)
    a2 = alpha * alpha
    denom = 4.0 + a2 * pp - a2 * px * px
    assert denom > 0.0, "Cayley denominator must be positive"
    out = (((2.0 - alpha * px) ** 2 - a2 * pp) * x + 4.0 * alpha * p) / denom
    nrm = np.linalg.norm(out)
    if abs(nrm - 1.0) > 1e-14:
        out = out / nrm
    return out


def rho(f_x: float, f_xplus: float, m0: float, m_alpha_p: float) -> float:
    """Actual over predicted reduction; ``-inf`` when the prediction is not a decrease."""
    predicted = m0 - m_alpha_p
    if not predicted > MIN_PREDICTED:
        return -math.inf
    return (f_x - f_xplus) / predicted


def reduction_ratio(actual: float, predicted: float) -> float:
    """
    ``rho`` from reductions that were computed as differences directly.

    Used inside :func:`run`, where both reductions come from
    cancellation-free formulas and only a nonpositive prediction is degenerate.
    """
    if not predicted > 0.0:
        return -math.inf
    return actual / predicted


def update_sigma(sigma: float, rho_k: float, alpha: float, cfg: SolverConfig) -> float:
    if alpha == 1.0:
        if rho_k > cfg.eta2:
            return max(cfg.sigma_min, 0.5 * sigma)
        return sigma
    return cfg.gamma3 * sigma


def _converged(bundle: EvalBundle, cfg: SolverConfig) -> bool:
    return float(np.linalg.norm(bundle.g)) <= cfg.grad_tol * max(1.0, abs(bundle.f))


def run(ctx: ObjectiveContext, x0, cfg: SolverConfig = SolverConfig(),
        callback: Callable[[EvalBundle, CubicModel, SubproblemSolution], None] | None = None,
        keep_trace: bool = True) -> EigenReport:
    """
    Minimize ``ctx.sign * f`` on the sphere from ``x0``.

    ``callback(bundle, model, solution)`` is called once per iteration after
    the subproblem solve, which lets tests inspect the model and its step.
    The reported eigenvalue is the un-negated objective value.
    """
    t0 = time.perf_counter()
    x = np.asarray(x0, dtype=np.float64)
    nx = np.linalg.norm(x)
    if x.shape != (ctx.n,):
        raise ValueError(f"start vector must have length {ctx.n}")
    if abs(nx - 1.0) > 1e-8:
        raise ValueError("start vector must lie on the unit sphere")
    x = x / nx
    sigma = cfg.sigma0
    trace = []
    status = Status.MAX_ITER
    bundle = evaluate(ctx, x)
    k = 0
    for k in range(cfg.max_iter + 1):
        if _converged(bundle, cfg):
            status = Status.CONVERGED
            break
        if k == cfg.max_iter:
            break
        model = CubicModel(bundle.f, bundle.g, bundle.B_matvec, sigma)
        sol = solve(model, max_krylov=cfg.max_krylov)
        if callback is not None:
            callback(bundle, model, sol)
        p = sol.p
        pnorm = float(np.linalg.norm(p))
        if pnorm <= 1e-16:
            status = Status.STALLED
            break
        gp = float(bundle.g @ p)
        pbp = float(p @ model.B_op(p))
        accepted = None
        for j in range(cfg.max_backtracks + 1):
            alpha = cfg.gamma1**j
            x_new = cayley_step(bundle.x, p, alpha)
            actual = -value_difference(ctx, bundle.x, x_new)
            predicted = -(alpha * gp + 0.5 * alpha**2 * pbp + sigma / 3.0 * (alpha * pnorm) ** 3)
            r_k = reduction_ratio(actual, predicted)
            if r_k >= cfg.eta1:
                accepted = (j, alpha, x_new, actual, r_k, predicted)
                break
        if accepted is None:
            status = Status.STALLED
            break
        j, alpha, x_new, actual, r_k, predicted = accepted
        if keep_trace:
            trace.append(IterationRecord(
                k=k, f=bundle.f, gnorm=float(np.linalg.norm(bundle.g)), sigma=sigma,
                alpha=alpha, rho=r_k, backtracks=j, f_next=bundle.f - actual, actual=actual,
                predicted=predicted, model_decrease=-sol.change, cauchy_value=sol.cauchy.value,
                model_value=sol.model_value, step_norm=pnorm, krylov_dim=sol.krylov_dim,
                used_cauchy=sol.used_cauchy,
            ))
        sigma = update_sigma(sigma, r_k, alpha, cfg)
        bundle = evaluate(ctx, x_new)

    x = bundle.x
    lam = ctx.sign * bundle.f
    return EigenReport(
        eigenvalue=lam,
        eigenvector=x,
        spectrum=ctx.metric.value,
        extreme="min" if ctx.sign > 0 else "max",
        residual=residual(ctx, x, lam),
        status=status,
        iterations=k,
        trace=trace,
        seconds=time.perf_counter() - t0,
    )


def random_sphere_point(n: int, seed: int, index: int) -> np.ndarray:
    """Start point ``index`` of a seeded multistart: a normalized standard Gaussian sample."""
    rng = np.random.default_rng([seed, index])
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


def best_of(reports: list[EigenReport], extreme: str) -> EigenReport:
    """
    Pick the extreme eigenvalue among converged runs (all runs if none
    converged); exact ties go to the smaller residual.
    """
    pool = [rep for rep in reports if rep.converged] or list(reports)
    sgn = 1.0 if extreme == "min" else -1.0
    return min(pool, key=lambda rep: (sgn * rep.eigenvalue, rep.residual))


def multistart(solver: Callable[[np.ndarray], EigenReport], n: int, starts: int, seed: int,
               threads: int = 1) -> list[EigenReport]:
    """
    Run ``solver`` from ``starts`` seeded random points on the sphere.

    Start i uses the point drawn from ``(seed, i)``, so results do not depend
    on the thread count.
    """

    def one(i):
        rep = solver(random_sphere_point(n, seed, i))
        rep.seed = i
        return rep

    if threads <= 1:
        return [one(i) for i in range(starts)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, range(starts)))


def solve_extreme(tensor, spectrum: str = "z", extreme: str = "min", starts: int = 100,
                  cfg: SolverConfig = SolverConfig(), threads: int = 1, keep_trace: bool = False):
    """
    Best-of-``starts`` ACRCET estimate of the smallest or largest H/Z-eigenvalue.

    :returns: ``(best, reports)``
    """
    if extreme not in ("min", "max"):
        raise ValueError("extreme must be 'min' or 'max'")
    ctx = ObjectiveContext(tensor, spectrum, sign=1.0 if extreme == "min" else -1.0)
    reports = multistart(lambda x0: run(ctx, x0, cfg, keep_trace=keep_trace), ctx.n, starts, cfg.seed, threads)
    return best_of(reports, extreme), reports
