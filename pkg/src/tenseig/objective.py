"""
The Rayleigh-type quotient ``f(x) = A x^r / B x^r`` on the unit sphere.

``B`` is never stored: for H-eigenvalues it is the diagonal identity tensor
and for Z-eigenvalues it is the symmetrized power ``I^{r/2}`` of the identity
matrix, and both have closed-form contractions. Stationary values of ``f`` are
H- or Z-eigenvalues of ``A`` respectively.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator

from .tensor import power_diff

#: Above this dimension the Hessian is kept matrix-free.
DENSE_HESSIAN_LIMIT = 2000


class Metric(str, Enum):
    H = "h"
    Z = "z"


def metric_contractions(metric: Metric, x: np.ndarray, r: int, want_matrix: bool = True):
    """
    Return ``(B x^r, B x^{r-1}, B x^{r-2})`` for the chosen identity-like ``B``.

    For the Z metric the matrix is ``(|x|^{r-2} I + (r-2)|x|^{r-4} x x^T)/(r-1)``,
    the exact second derivative of ``|x|^r`` divided by ``r(r-1)``; off the
    sphere this keeps the Hessian formula consistent with finite differences.
    """
    if metric == Metric.H:
        bxr = float(np.sum(x**r))
        bxr1 = x ** (r - 1)
        bxr2 = np.diag(x ** (r - 2)) if want_matrix else None
    else:
        nx2 = float(x @ x)
        bxr = nx2 ** (r / 2)
        bxr1 = nx2 ** ((r - 2) / 2) * x
        bxr2 = None
        if want_matrix:
            bxr2 = nx2 ** ((r - 2) / 2) * np.eye(x.size)
            if r > 2:
                bxr2 += (r - 2) * nx2 ** ((r - 4) / 2) * np.outer(x, x)
            bxr2 /= r - 1
    return bxr, bxr1, bxr2


@dataclass(frozen=True)
class ObjectiveContext:
    """
    Tensor plus metric. ``tensor`` is anything exposing ``order``, ``dim``,
    ``txr``, ``txr1`` and ``txr2`` (a dense tensor or a hypergraph tensor).

    ``sign = -1`` minimizes ``-f``, which is how largest eigenvalues are found.
    """

    tensor: Any
    metric: Metric = Metric.Z
    sign: float = 1.0
    dense_hessian_limit: int = DENSE_HESSIAN_LIMIT

    def __post_init__(self):
        object.__setattr__(self, "metric", Metric(self.metric))
        r = self.tensor.order
        if r < 2 or r % 2:
            raise ValueError(f"tensor order must be even and >= 2, got {r}")
        if self.sign not in (1.0, -1.0):
            raise ValueError("sign must be +1 or -1")

    @property
    def r(self) -> int:
        return self.tensor.order

    @property
    def n(self) -> int:
        return self.tensor.dim


@dataclass
class EvalBundle:
    x: np.ndarray
    f: float
    g: np.ndarray
    axr: float
    bxr: float
    axr1: np.ndarray
    bxr1: np.ndarray
    axr2: Any = None
    bxr2: Any = None
    H: Any = None
    B: Any = None

    def B_matvec(self, v: np.ndarray) -> np.ndarray:
        return self.B @ v


def value(ctx: ObjectiveContext, x) -> float:
    """``f(x)`` alone; cheaper than :func:`evaluate` for trial points."""
    x = np.asarray(x, dtype=np.float64)
    bxr, _, _ = metric_contractions(ctx.metric, x, ctx.r, want_matrix=False)
    return ctx.sign * ctx.tensor.txr(x) / bxr


def metric_difference(metric: Metric, x: np.ndarray, y: np.ndarray, r: int) -> float:
    """``B y^r - B x^r`` without cancellation."""
    if metric == Metric.H:
        return float(np.sum(power_diff(x, y, r)))
    u, v = float(y @ y), float(x @ x)
    du = float((y - x) @ (y + x))
    q = r // 2
    return du * sum(u**j * v ** (q - 1 - j) for j in range(q))


def value_difference(ctx: ObjectiveContext, x, y) -> float:
    """
    ``f(y) - f(x)`` computed from cancellation-free differences of the
    numerator and denominator, so that it stays meaningful when both values
    agree to nearly all digits.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    t = ctx.tensor
    r = ctx.r
    ax = t.txr(x)
    if hasattr(t, "txr_diff"):
        da = t.txr_diff(x, y)
    else:
        da = t.txr(y) - ax
    bx, _, _ = metric_contractions(ctx.metric, x, r, want_matrix=False)
    db = metric_difference(ctx.metric, x, y, r)
    by = bx + db
    return ctx.sign * (da * bx - ax * db) / (bx * by)


def _hessian_operator(r, axr, bxr, axr1, bxr1, axr2, bxr2):
    c1 = r * (r - 1) / bxr
    c2 = r * r / bxr**2
    c3 = r * (r - 1) * axr / bxr**2
    c4 = r * r * axr / bxr**3
    n = axr1.size

    def mv(v):
        v = np.ravel(v)
        return (
            c1 * (axr2 @ v)
            - c2 * (axr1 * (bxr1 @ v) + bxr1 * (axr1 @ v))
            - c3 * (bxr2 @ v)
            + c4 * 2.0 * bxr1 * (bxr1 @ v)
        )

    return LinearOperator((n, n), matvec=mv, rmatvec=mv, dtype=np.float64)


def _projected(op: LinearOperator, x: np.ndarray) -> LinearOperator:
    def mv(v):
        v = np.ravel(v)
        w = v - x * (x @ v)
        hw = op.matvec(w)
        return hw - x * (x @ hw)

    return LinearOperator(op.shape, matvec=mv, rmatvec=mv, dtype=np.float64)


def evaluate(ctx: ObjectiveContext, x, want_hessian: bool = True) -> EvalBundle:
    """
    Value, gradient and (optionally) Hessian and tangent-projected Hessian at ``x``.

    ``x`` is renormalized onto the sphere first. The gradient is
    ``r/Bx^r * (Ax^{r-1} - f Bx^{r-1})``; the Hessian is the four-term
    expression built from the six contractions, with ``a ⊚ b = ab^T + ba^T``.
    ``B`` in the result is ``(I - xx^T) H (I - xx^T)``.
    """
    x = np.asarray(x, dtype=np.float64)
    nx = np.linalg.norm(x)
    if not np.isfinite(nx) or nx == 0.0:
        raise FloatingPointError("cannot evaluate at a zero or nonfinite point")
    x = x / nx
    return evaluate_at(ctx, x, want_hessian)


def evaluate_at(ctx: ObjectiveContext, x: np.ndarray, want_hessian: bool = True) -> EvalBundle:
    """Like :func:`evaluate` but without renormalizing ``x`` (used by derivative checks)."""
    r, s = ctx.r, ctx.sign
    t = ctx.tensor
    axr = s * t.txr(x)
    axr1 = s * t.txr1(x)
    dense = x.size <= ctx.dense_hessian_limit
    bxr, bxr1, bxr2 = metric_contractions(ctx.metric, x, r, want_matrix=want_hessian and dense)
    f = axr / bxr
    g = (r / bxr) * (axr1 - f * bxr1)
    if not (np.isfinite(f) and np.all(np.isfinite(g))):
        raise FloatingPointError("nonfinite objective or gradient")
    out = EvalBundle(x=x, f=f, g=g, axr=axr, bxr=bxr, axr1=axr1, bxr1=bxr1)
    if not want_hessian:
        return out
    axr2 = t.txr2(x)
    axr2 = -axr2 if s < 0 else axr2
    out.axr2, out.bxr2 = axr2, bxr2
    n = x.size
    if dense:
        a2 = axr2.toarray() if sp.issparse(axr2) else np.asarray(axr2)
        H = (
            (r * (r - 1) / bxr) * a2
            - (r * r / bxr**2) * (np.outer(axr1, bxr1) + np.outer(bxr1, axr1))
            - (r * (r - 1) * axr / bxr**2) * bxr2
            + (r * r * axr / bxr**3) * 2.0 * np.outer(bxr1, bxr1)
        )
        H = 0.5 * (H + H.T)
        # (I - xx^T) H (I - xx^T) expanded into rank-one updates, O(n^2)
        hx = H @ x
        B = H - np.outer(x, hx) - np.outer(hx, x) + float(x @ hx) * np.outer(x, x)
        out.H, out.B = H, 0.5 * (B + B.T)
    else:
        if ctx.metric == Metric.H:
            bxr2 = sp.diags(x ** (r - 2))
        else:
            nx2 = float(x @ x)
            d = nx2 ** ((r - 2) / 2) / (r - 1)
            w = (r - 2) * nx2 ** ((r - 4) / 2) / (r - 1) if r > 2 else 0.0
            bxr2 = LinearOperator((n, n), matvec=lambda v: d * np.ravel(v) + w * x * (x @ np.ravel(v)), dtype=np.float64)
        out.bxr2 = bxr2
        out.H = _hessian_operator(r, axr, bxr, axr1, bxr1, axr2, bxr2)
        out.B = _projected(out.H, x)
    return out


def residual(ctx: ObjectiveContext, x, lam: float) -> float:
    """
    Eigen-residual ``|A x^{r-1} - lam B x^{r-1}|``, where ``B x^{r-1}`` is
    ``x^{[r-1]}`` (H) or ``x`` (Z) and ``lam`` refers to the un-negated tensor.
    """
    x = np.asarray(x, dtype=np.float64)
    _, bxr1, _ = metric_contractions(ctx.metric, x, ctx.r, want_matrix=False)
    return float(np.linalg.norm(ctx.tensor.txr1(x) - lam * bxr1))
