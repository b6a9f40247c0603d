"""
Uniform hypergraphs stored as an m-by-r edge matrix, and edge-wise products
with their adjacency, Laplacian, signless Laplacian and degree tensors.

None of the contractions here build the n**r tensor. ``T x^{r-2}`` is
accumulated per edge and per column pair::

    for i < j:  acc[G[:, i], G[:, j]] += prod(X without columns i, j)
    result = (acc + acc.T) / (r - 1)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, permutations
from math import factorial
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .tensor import DenseSymmetricTensor, power_diff

#: Above this many vertices ``fcs_txr2`` returns a CSR matrix instead of a dense array.
SPARSE_THRESHOLD = 500
#: Largest ``n**r`` that :func:`materialize` will allocate.
MATERIALIZE_BUDGET = 10**7


class HypergraphFormatError(ValueError):
    """Raised when a hypergraph file cannot be parsed or is invalid."""


class Kind(str, Enum):
    ADJACENCY = "adjacency"
    LAPLACIAN = "laplacian"
    SIGNLESS = "signless"
    DEGREE = "degree"


@dataclass(frozen=True)
class UniformHypergraph:
    """
    An r-uniform hypergraph on vertices ``1..n``.

    ``edges`` is the m-by-r matrix of 1-based vertex ids. Each row must hold r
    distinct vertices and no two rows may be the same vertex set.
    """

    n: int
    edges: np.ndarray
    _degrees: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        g = np.array(self.edges, dtype=np.int64)
        if g.ndim != 2 or g.shape[0] < 1 or g.shape[1] < 2:
            raise HypergraphFormatError("edge matrix must be m x r with m >= 1, r >= 2")
        if self.n < 1:
            raise HypergraphFormatError("vertex count must be positive")
        if g.min() < 1 or g.max() > self.n:
            raise HypergraphFormatError(f"vertex ids must lie in 1..{self.n}")
        srt = np.sort(g, axis=1)
        if np.any(srt[:, 1:] == srt[:, :-1]):
            bad = int(np.nonzero(np.any(srt[:, 1:] == srt[:, :-1], axis=1))[0][0])
            raise HypergraphFormatError(f"edge {bad + 1} repeats a vertex")
        uniq = np.unique(srt, axis=0)
        if uniq.shape[0] != srt.shape[0]:
            raise HypergraphFormatError("duplicate edges")
        g.setflags(write=False)
        object.__setattr__(self, "edges", g)
        deg = np.bincount(g.ravel() - 1, minlength=self.n)
        deg.setflags(write=False)
        object.__setattr__(self, "_degrees", deg)

    @property
    def m(self) -> int:
        return self.edges.shape[0]

    @property
    def r(self) -> int:
        return self.edges.shape[1]


def degrees(g: UniformHypergraph) -> np.ndarray:
    """Number of edges containing each vertex (index 0 is vertex 1)."""
    return g._degrees.copy()


def _others_product(xm: np.ndarray) -> np.ndarray:
    """Column c of the result is the row product of ``xm`` with column c left out."""
    m, r = xm.shape
    left = np.ones((m, r))
    right = np.ones((m, r))
    for c in range(1, r):
        left[:, c] = left[:, c - 1] * xm[:, c - 1]
    for c in range(r - 2, -1, -1):
        right[:, c] = right[:, c + 1] * xm[:, c + 1]
    return left * right


@dataclass(frozen=True)
class HypergraphTensor:
    """Implicit adjacency / Laplacian / signless Laplacian / degree tensor of ``graph``."""

    graph: UniformHypergraph
    kind: Kind = Kind.ADJACENCY
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))

    @property
    def order(self) -> int:
        return self.graph.r

    @property
    def dim(self) -> int:
        return self.graph.n

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dim,):
            raise ValueError(f"vector of length {self.dim} expected, got shape {x.shape}")
        return x

    def _signs(self):
        """Coefficients of the degree part and the adjacency part."""
        return {
            Kind.ADJACENCY: (0.0, 1.0),
            Kind.LAPLACIAN: (1.0, -1.0),
            Kind.SIGNLESS: (1.0, 1.0),
            Kind.DEGREE: (1.0, 0.0),
        }[self.kind]

    def txr(self, x) -> float:
        return fcs_txr(self, x)

    def txr1(self, x) -> np.ndarray:
        return fcs_txr1(self, x)

    def txr2(self, x):
        return fcs_txr2(self, x)

    def txr_diff(self, x, y) -> float:
        return fcs_txr_diff(self, x, y)

    def __neg__(self) -> "HypergraphTensor":
        return HypergraphTensor(self.graph, self.kind, -self.scale)


def fcs_txr(t: HypergraphTensor, x) -> float:
    """``T x^r``: the adjacency part is ``r * sum_e prod_{j in e} x_j``."""
    x = t._check(x)
    g = t.graph
    cd, ca = t._signs()
    val = 0.0
    if ca:
        val += ca * g.r * float(np.sum(np.prod(x[g.edges - 1], axis=1)))
    if cd:
        val += cd * float(np.dot(g._degrees, x**g.r))
    return t.scale * val


def fcs_txr_diff(t: HypergraphTensor, x, y) -> float:
    """
    ``T y^r - T x^r`` without cancellation; per edge the product difference is
    telescoped as ``sum_j d_j prod_{i<j} y_i prod_{i>j} x_i``.
    """
    x = t._check(x)
    y = t._check(y)
    g = t.graph
    cd, ca = t._signs()
    val = 0.0
    if ca:
        xm = x[g.edges - 1]
        ym = y[g.edges - 1]
        dm = ym - xm
        m, r = xm.shape
        left = np.ones(m)
        right = np.ones((m, r))
        for c in range(r - 2, -1, -1):
            right[:, c] = right[:, c + 1] * xm[:, c + 1]
        acc = np.zeros(m)
        for c in range(r):
            acc += left * dm[:, c] * right[:, c]
            left = left * ym[:, c]
        val += ca * r * float(np.sum(acc))
    if cd:
        val += cd * float(np.dot(g._degrees, power_diff(x, y, g.r)))
    return t.scale * val


def fcs_txr1(t: HypergraphTensor, x) -> np.ndarray:
    """``(T x^{r-1})_i``: the adjacency part sums, over edges at i, the product of the other vertices."""
    x = t._check(x)
    g = t.graph
    cd, ca = t._signs()
    out = np.zeros(g.n)
    if ca:
        others = _others_product(x[g.edges - 1])
        out += ca * np.bincount(g.edges.ravel() - 1, weights=others.ravel(), minlength=g.n)
    if cd:
        out += cd * g._degrees * x ** (g.r - 1)
    return t.scale * out


def adjacency_txr2(g: UniformHypergraph, x: np.ndarray, sparse: bool):
    """Edge-wise ``A x^{r-2}`` for the adjacency tensor of ``g``."""
    m, r = g.m, g.r
    xm = x[g.edges - 1]
    rows, cols, vals = [], [], []
    for i, j in combinations(range(r), 2):
        keep = [c for c in range(r) if c != i and c != j]
        rows.append(g.edges[:, i] - 1)
        cols.append(g.edges[:, j] - 1)
        vals.append(np.prod(xm[:, keep], axis=1) if keep else np.ones(m))
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    acc = sp.coo_matrix((vals, (rows, cols)), shape=(g.n, g.n)).tocsr()
    # (r-2)!/(r-1)! applied once at the end
    out = (acc + acc.T) * (1.0 / (r - 1))
    return out.tocsr() if sparse else out.toarray()


def fcs_txr2(t: HypergraphTensor, x, sparse: bool | None = None):
    """
    ``T x^{r-2}`` without forming the tensor.

    Returns a dense array when ``n <= SPARSE_THRESHOLD`` and a CSR matrix
    otherwise, unless ``sparse`` forces one or the other. The adjacency part
    is built as ``acc + acc.T`` and is therefore exactly symmetric.
    """
    x = t._check(x)
    g = t.graph
    if sparse is None:
        sparse = g.n > SPARSE_THRESHOLD
    cd, ca = t._signs()
    diag = cd * g._degrees * x ** (g.r - 2) if cd else np.zeros(g.n)
    if ca:
        out = ca * adjacency_txr2(g, x, sparse)
        if sparse:
            out = out + sp.diags(diag, format="csr")
        else:
            out[np.diag_indices(g.n)] += diag
    else:
        out = sp.diags(diag, format="csr") if sparse else np.diag(diag)
    return t.scale * out


def materialize(t: HypergraphTensor, budget: int = MATERIALIZE_BUDGET) -> DenseSymmetricTensor:
    """Dense copy of ``t`` for cross-checks on small graphs."""
    g = t.graph
    if float(g.n) ** g.r > budget:
        raise ValueError(f"n^r = {g.n}^{g.r} exceeds the materialization budget {budget}")
    a = np.zeros((g.n,) * g.r)
    cd, ca = t._signs()
    if ca:
        w = ca / factorial(g.r - 1)
        for edge in g.edges - 1:
            for perm in permutations(edge):
                a[perm] = w
    if cd:
        idx = np.arange(g.n)
        a[(idx,) * g.r] += cd * g._degrees
    return DenseSymmetricTensor(t.scale * a, assume_symmetric=True)


def coo_entries(t: HypergraphTensor):
    """
    Nonzero entries of ``t`` as (index tuples, values), one row per stored tuple.

    Lists all ``m * r!`` adjacency tuples plus the diagonal, so memory grows
    with the tensor's nonzero count rather than with ``n**r``.
    """
    g = t.graph
    cd, ca = t._signs()
    idx_parts, val_parts = [], []
    if ca:
        perms = np.array(list(permutations(range(g.r))))
        tuples = (g.edges - 1)[:, perms].reshape(-1, g.r)
        idx_parts.append(tuples)
        val_parts.append(np.full(tuples.shape[0], ca / factorial(g.r - 1)))
    if cd:
        d = np.arange(g.n)
        idx_parts.append(np.repeat(d[:, None], g.r, axis=1))
        val_parts.append(cd * g._degrees.astype(np.float64))
    return np.concatenate(idx_parts), t.scale * np.concatenate(val_parts)


def naive_txr2(t: HypergraphTensor, x, budget: int = MATERIALIZE_BUDGET) -> np.ndarray:
    """
    ``T x^{r-2}`` by dense contraction over all ``n**r`` entries.

    This is the reference path the edge-wise kernel is meant to beat. Small
    tensors are materialized whole; larger ones are streamed one first-index
    slab (``n**(r-1)`` entries) at a time, so the work is the full dense
    contraction while memory stays at one slab.
    """
    x = t._check(x)
    g = t.graph
    n, r = g.n, g.r
    if float(n) ** r <= budget:
        a = materialize(t, budget).entries
        return a.reshape(n, n, -1) @ _kron_power(x, r - 2)
    if float(n) ** (r - 1) > budget:
        raise ValueError(f"a single slab of n^(r-1) = {n}^{r - 1} entries exceeds the budget {budget}")
    idx, vals = coo_entries(t)
    order = np.argsort(idx[:, 0], kind="stable")
    idx, vals = idx[order], vals[order]
    bounds = np.searchsorted(idx[:, 0], np.arange(n + 1))
    flat = np.ravel_multi_index(tuple(idx[:, 1:].T), (n,) * (r - 1))
    xk = _kron_power(x, r - 2)
    out = np.empty((n, n))
    slab = np.empty(n ** (r - 1))
    for i in range(n):
        slab.fill(0.0)
        lo, hi = bounds[i], bounds[i + 1]
        slab[flat[lo:hi]] = vals[lo:hi]
        out[i] = slab.reshape(n, -1) @ xk
    return out


def _kron_power(x: np.ndarray, k: int) -> np.ndarray:
    out = np.ones(1)
    for _ in range(k):
        out = np.multiply.outer(out, x).ravel()
    return out


def generate_loose_cycle(k: int, m: int) -> UniformHypergraph:
    """
    k-uniform loose cycle with m edges on ``m*(k-1)`` vertices.

    Edge i holds vertices ``i*(k-1)+1 .. i*(k-1)+k-1`` plus the first vertex of
    edge i+1 (cyclically). With ``k == 2`` this is the ordinary m-cycle.
    """
    if k < 2 or m < 3:
        raise ValueError("loose cycle needs k >= 2 and m >= 3")
    n = m * (k - 1)
    edges = []
    for i in range(m):
        start = i * (k - 1)
        row = [start + c + 1 for c in range(k - 1)]
        row.append(((i + 1) * (k - 1)) % n + 1)
        edges.append(row)
    return UniformHypergraph(n, np.array(edges))


def generate_flower(petals: int, k: int) -> UniformHypergraph:
    """k-uniform flower: every edge holds hub vertices 1 and 2 plus k-2 private vertices."""
    if petals < 1 or k < 3:
        raise ValueError("flower needs petals >= 1 and k >= 3")
    n = 2 + petals * (k - 2)
    edges = [[1, 2] + [3 + p * (k - 2) + c for c in range(k - 2)] for p in range(petals)]
    return UniformHypergraph(n, np.array(edges))


def load_hypergraph(path) -> UniformHypergraph:
    """
    Read an edge-list file: header ``n r m`` then m rows of r 1-based vertex ids.
    Text after ``#`` is ignored.
    """
    rows = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise HypergraphFormatError("empty hypergraph file")
    try:
        n, r, m = (int(v) for v in rows[0])
    except ValueError as exc:
        raise HypergraphFormatError(f"bad header line: {' '.join(rows[0])!r}") from exc
    body = rows[1:]
    if len(body) != m:
        raise HypergraphFormatError(f"header announces {m} edges, file has {len(body)}")
    edges = []
    for lineno, row in enumerate(body, start=2):
        if len(row) != r:
            raise HypergraphFormatError(f"edge line {lineno}: expected {r} vertex ids")
        try:
            edges.append([int(v) for v in row])
        except ValueError as exc:
            raise HypergraphFormatError(f"edge line {lineno}: {exc}") from exc
    return UniformHypergraph(n, np.array(edges, dtype=np.int64).reshape(m, r))


def save_hypergraph(g: UniformHypergraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.r} {g.m}\n")
        for row in g.edges:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")
