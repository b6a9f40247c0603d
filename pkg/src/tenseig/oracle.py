"""
Brute-force references: full-summation contractions and an exhaustive scan
for all eigenpairs of two-dimensional tensors.

Nothing here calls into :mod:`tenseig.tensor`'s contractions, the objective
module or the solvers, so it can be used to check them.
"""

from __future__ import annotations

from itertools import product

import numpy as np

NAIVE_BUDGET = 10**7


def naive_contract(t, x, drop: int, reverse: bool = False):
    """
    ``T x^r`` (drop=0), ``T x^{r-1}`` (drop=1) or ``T x^{r-2}`` (drop=2) by
    looping over every index tuple.

    ``x`` may also be an ``(n, K)`` batch; the result then gains a trailing
    axis of length K. ``reverse`` walks the tuples in the opposite order.
    """
    a = t.entries if hasattr(t, "entries") else np.asarray(t)
    r, n = a.ndim, a.shape[0]
    if drop not in (0, 1, 2) or drop > r:
        raise ValueError("drop must be 0, 1 or 2")
    if float(n) ** r > NAIVE_BUDGET:
        raise ValueError(f"n^r = {n}^{r} exceeds the naive budget")
    x = np.asarray(x, dtype=np.float64)
    batch = x.shape[1:]
    out = np.zeros((n,) * drop + batch)
    tuples = list(product(range(n), repeat=r))
    if reverse:
        tuples.reverse()
    for idx in tuples:
        v = a[idx]
        if v == 0.0:
            continue
        term = np.full(batch, v)
        for i in idx[drop:]:
            term = term * x[i]
        out[idx[:drop]] += term
    return out


def _angle_derivative(a: np.ndarray, theta: np.ndarray, spectrum: str):
    """Objective F(theta) on the unit circle and dF/dtheta."""
    r = a.ndim
    c, s = np.cos(theta), np.sin(theta)
    x = np.vstack([c, s])
    dx = np.vstack([-s, c])
    num = naive_contract(a, x, 0)
    grad_num = r * naive_contract(a, x, 1)
    dnum = np.sum(grad_num * dx, axis=0)
    if spectrum == "z":
        return num, dnum
    den = c**r + s**r
    dden = r * (c ** (r - 1) * (-s) + s ** (r - 1) * c)
    return num / den, (dnum * den - num * dden) / den**2


def circle_eigenpairs(t, spectrum: str = "z", grid: int = 10**6):
    """
    All real H- or Z-eigenpairs of an even-order tensor with n = 2.

    Scans ``theta`` in ``[0, pi]`` for sign changes and exact zeros of
    ``dF/dtheta``, refines each bracket by bisection down to floating-point
    resolution, and merges ``x`` with ``-x``.

    :returns: list of ``(eigenvalue, eigenvector)`` sorted by eigenvalue
    """
    a = t.entries if hasattr(t, "entries") else np.asarray(t)
    if a.shape[0] != 2 or a.ndim % 2:
        raise ValueError("circle_eigenpairs needs an even-order tensor with n = 2")
    spectrum = spectrum.lower()
    if spectrum not in ("h", "z"):
        raise ValueError("spectrum must be 'h' or 'z'")
    theta = np.linspace(0.0, np.pi, grid + 1)
    _, d = _angle_derivative(a, theta, spectrum)
    roots = list(theta[d == 0.0])
    idx = np.nonzero(d[:-1] * d[1:] < 0.0)[0]
    lo, hi = theta[idx].copy(), theta[idx + 1].copy()
    dlo = d[idx].copy()
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        active = (mid > lo) & (mid < hi)
        if not np.any(active):
            break
        _, dm = _angle_derivative(a, mid, spectrum)
        exact = dm == 0.0
        left = (np.sign(dm) == np.sign(dlo)) & ~exact
        lo = np.where(active & left, mid, lo)
        dlo = np.where(active & left, dm, dlo)
        hi = np.where(active & ~left & ~exact, mid, hi)
        lo = np.where(active & exact, mid, lo)
        hi = np.where(active & exact, mid, hi)
    roots.extend(0.5 * (lo + hi))

    roots = sorted(float(th) % np.pi for th in roots)
    merged = []
    for th in roots:
        if merged and th - merged[-1] <= 1e-9:
            continue
        merged.append(th)
    if len(merged) > 1 and merged[0] + np.pi - merged[-1] <= 1e-9:
        merged.pop()
    out = []
    for th in merged:
        f, _ = _angle_derivative(a, np.array([th]), spectrum)
        out.append((float(f[0]), np.array([np.cos(th), np.sin(th)])))
    out.sort(key=lambda pair: pair[0])
    return out


def eigenvalues_on_circle(t, spectrum: str = "z", grid: int = 10**6) -> np.ndarray:
    """Distinct eigenvalues from :func:`circle_eigenpairs` (merged within 1e-10)."""
    vals = []
    for lam, _ in circle_eigenpairs(t, spectrum, grid):
        if not vals or lam - vals[-1] > 1e-10 * max(1.0, abs(lam)):
            vals.append(lam)
    return np.array(vals)
