"""
Approximate minimization of the cubic model

    m(p) = f + g^T p + 1/2 p^T B p + sigma/3 |p|^3

by Lanczos reduction to a tridiagonal problem followed by a Newton solve of
the secular equation (Cartis, Gould & Toint, 2011).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

Operator = Callable[[np.ndarray], np.ndarray]


@dataclass
class CubicModel:
    f: float
    g: np.ndarray
    B_op: Operator
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        self.g = np.asarray(self.g, dtype=np.float64)

    @classmethod
    def from_matrix(cls, f, g, B, sigma) -> "CubicModel":
        B = np.asarray(B, dtype=np.float64)
        return cls(f, g, lambda v: B @ v, sigma)


@dataclass
class CauchyPoint:
    tau: float
    p: np.ndarray
    value: float
    change: float  # m(p) - f


@dataclass
class SubproblemSolution:
    p: np.ndarray
    model_value: float
    cauchy: CauchyPoint
    change: float  # m(p) - f, computed without forming f + ...
    lam: float
    krylov_dim: int
    used_cauchy: bool = False
    newton_failed: bool = False


def model_change(m: CubicModel, p) -> float:
    """``m(p) - m(0)``; free of the cancellation in ``model_value(m, p) - f``."""
    p = np.asarray(p, dtype=np.float64)
    return float(m.g @ p + 0.5 * (p @ m.B_op(p)) + m.sigma / 3.0 * np.linalg.norm(p) ** 3)


def model_value(m: CubicModel, p) -> float:
    return m.f + model_change(m, p)


def cauchy_point(m: CubicModel) -> CauchyPoint:
    """
    Minimizer of the model along ``-g``.

    ``tau`` is the positive root of ``sigma |g|^3 tau^2 + (g^T B g) tau - |g|^2``.
    """
    gn = float(np.linalg.norm(m.g))
    if gn == 0.0:
        raise ValueError("zero gradient: the model is stationary at p = 0")
    a = m.sigma * gn**3
    b = float(m.g @ m.B_op(m.g))
    c = gn**2
    disc = np.sqrt(b * b + 4.0 * a * c)
    # cancellation-free form of the positive root
    tau = 2.0 * c / (b + disc) if b >= 0 else (disc - b) / (2.0 * a)
    p = -tau * m.g
    ch = model_change(m, p)
    return CauchyPoint(tau, p, m.f + ch, ch)


def estimate_norm(op: Operator, v0: np.ndarray, steps: int = 5) -> float:
    """Power-iteration estimate of the spectral norm of a symmetric operator."""
    v = np.asarray(v0, dtype=np.float64)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return 0.0
    v = v / nv
    est = 0.0
    for _ in range(steps):
        w = op(v)
        est = float(np.linalg.norm(w))
        if est == 0.0:
            break
        v = w / est
    return est


def minimize_reduced(diag, offdiag, gamma: float, sigma: float, lam0: float | None = None,
                     max_newton: int = 100):
    """
    Global minimizer of ``gamma u_1 + 1/2 u^T T u + sigma/3 |u|^3`` for a
    symmetric tridiagonal ``T``.

    Solves ``(T + lam I) u = -gamma e_1`` with ``lam = sigma |u|`` and
    ``T + lam I`` positive semidefinite. Newton runs on the increasing function
    ``1/|u(lam)| - sigma/lam`` inside a bisection bracket. The hard case, where
    ``e_1`` has no component along the lowest eigenvector, is handled by adding
    that eigenvector to reach the required norm.

    :returns: ``(u, lam, converged)``
    """
    diag = np.atleast_1d(np.asarray(diag, dtype=np.float64))
    offdiag = np.asarray(offdiag, dtype=np.float64)
    k = diag.size
    if k == 1:
        theta, V = diag.copy(), np.ones((1, 1))
    else:
        theta, V = scipy.linalg.eigh_tridiagonal(diag, offdiag)
    c = gamma * V[0, :]
    scale = max(1.0, float(np.max(np.abs(theta))))
    lo = max(0.0, -theta[0])

    low = theta <= theta[0] + 1e-12 * scale
    if theta[0] <= 0.0 and np.all(np.abs(c[low]) <= 1e-14 * max(abs(gamma), 1e-300)):
        c = np.where(low, 0.0, c)
        rest = np.zeros(k)
        hi_idx = ~low
        if np.any(hi_idx):
            rest_coef = np.zeros(k)
            rest_coef[hi_idx] = -c[hi_idx] / (theta[hi_idx] + lo)
            rest = V @ rest_coef
        target = lo / sigma
        rn = float(np.linalg.norm(rest))
        if rn <= target:
            t = np.sqrt(max(target**2 - rn**2, 0.0))
            u = rest + t * V[:, 0]
            return u, lo, True

    def psi(lam):
        w = c / (theta + lam)
        s = float(w @ w)
        un = np.sqrt(s)
        d = float(np.sum(c * c / (theta + lam) ** 3)) / un**3 + sigma / lam**2
        return 1.0 / un - sigma / lam, d

    a = lo
    step = max(abs(gamma) * sigma, 1.0) ** 0.5
    b = lo + step
    while psi(b)[0] <= 0.0:
        step *= 2.0
        b = lo + step
    lam = lam0 if lam0 is not None and a < lam0 < b else 0.5 * (a + b)
    converged = False
    for _ in range(max_newton):
        val, der = psi(lam)
        if val == 0.0:
            converged = True
            break
        if val < 0:
            a = lam
        else:
            b = lam
        nxt = lam - val / der if der > 0 else 0.5 * (a + b)
        if not (a < nxt < b):
            nxt = 0.5 * (a + b)
        if abs(nxt - lam) <= 1e-15 * max(lam, 1e-300) or b - a <= 1e-15 * b:
            lam = nxt
            converged = True
            break
        lam = nxt
    u = V @ (-c / (theta + lam))
    return u, lam, converged


def solve(m: CubicModel, tol: float | None = None, max_krylov: int = 50) -> SubproblemSolution:
    """
    Inexact minimizer of the cubic model over a growing Krylov space.

    Lanczos starts from ``g/|g|``; at each dimension j the reduced cubic is
    minimized exactly and the loop stops when ``|grad m(p_j)| <= tol |g|``
    (default ``tol = min(0.1, sqrt(|g|))``), on breakdown, or at
    ``min(n, max_krylov)``. The result never does worse than the Cauchy point;
    if it would, the Cauchy point is returned instead.
    """
    g = m.g
    n = g.size
    gn = float(np.linalg.norm(g))
    cp = cauchy_point(m)
    if tol is None:
        tol = min(0.1, np.sqrt(gn))
    kmax = max(1, min(n, max_krylov))

    Q = np.zeros((n, kmax))
    alphas, betas = [], []
    q = g / gn
    q_prev = np.zeros(n)
    beta_prev = 0.0
    u, lam, ok = None, 0.0, True
    j = 0
    for j in range(1, kmax + 1):
        Q[:, j - 1] = q
        w = m.B_op(q)
        alpha = float(q @ w)
        w = w - alpha * q - beta_prev * q_prev
        # full reorthogonalization; the basis never exceeds max_krylov columns
        w -= Q[:, :j] @ (Q[:, :j].T @ w)
        beta = float(np.linalg.norm(w))
        alphas.append(alpha)
        u, lam, ok = minimize_reduced(alphas, betas, gn, m.sigma, lam0=m.sigma * np.sqrt(gn))
        grad_norm = abs(beta * u[-1])
        breakdown = beta <= 1e-14 * max(1.0, max(abs(a) for a in alphas))
        if grad_norm <= tol * gn or breakdown or j == kmax:
            break
        betas.append(beta)
        q_prev, q = q, w / beta
        beta_prev = beta

    p = Q[:, :j] @ u
    ch = model_change(m, p)
    newton_failed = not ok
    if newton_failed:
        warnings.warn("secular Newton iteration did not converge; using the Cauchy point", RuntimeWarning)
    if newton_failed or not ch <= cp.change:
        return SubproblemSolution(cp.p, cp.value, cp, cp.change, lam, j, used_cauchy=True,
                                  newton_failed=newton_failed)
    return SubproblemSolution(p, m.f + ch, cp, ch, lam, j)
