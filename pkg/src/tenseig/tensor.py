"""
Dense real symmetric tensors and their tensor-vector contractions.

A tensor of order ``r`` and dimension ``n`` is stored as a full ``n**r`` block.
That is only sensible for small ``n``; large structured tensors go through
:mod:`tenseig.hypergraph` instead.
"""

from __future__ import annotations

from itertools import permutations
from math import factorial
from pathlib import Path

import numpy as np


class TensorFormatError(ValueError):
    """Raised when a tensor file cannot be parsed."""


def _average_permutations(raw: np.ndarray) -> np.ndarray:
    r = raw.ndim
    out = np.zeros_like(raw)
    for perm in permutations(range(r)):
        out += np.transpose(raw, perm)
    return out / factorial(r)


class TensorSizeError(TensorFormatError):
    """Header announces a tensor too large to hold densely."""


class DenseSymmetricTensor:
    """
    Order-r, dimension-n real symmetric tensor with immutable entries.

    :param entries: array of shape ``(n,)*r``
    :param assume_symmetric: skip the symmetrizing average. Use only when the
        entries are known to be symmetric already (see :meth:`is_symmetric`).
    """

    def __init__(self, entries, assume_symmetric: bool = False):
        a = np.array(entries, dtype=np.float64)
        if a.ndim < 1:
            raise ValueError("tensor must have order >= 1")
        if len(set(a.shape)) != 1:
            raise ValueError(f"tensor must be cubical, got shape {a.shape}")
        if a.shape[0] < 1:
            raise ValueError("tensor dimension must be positive")
        if not np.all(np.isfinite(a)):
            raise ValueError("tensor entries must be finite")
        if not assume_symmetric:
            a = _average_permutations(a)
        a.setflags(write=False)
        self._a = a

    @property
    def entries(self) -> np.ndarray:
        return self._a

    @property
    def order(self) -> int:
        return self._a.ndim

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    def is_symmetric(self, tol: float = 0.0) -> bool:
        sym = _average_permutations(self._a)
        return bool(np.max(np.abs(sym - self._a), initial=0.0) <= tol)

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dim,):
            raise ValueError(f"vector of length {self.dim} expected, got shape {x.shape}")
        return x

    def txr(self, x) -> float:
        return txr(self, x)

    def txr1(self, x) -> np.ndarray:
        return txr1(self, x)

    def txr2(self, x) -> np.ndarray:
        return txr2(self, x)

    def txr_diff(self, x, y) -> float:
        return txr_diff(self, x, y)

    def __neg__(self) -> "DenseSymmetricTensor":
        return DenseSymmetricTensor(-self._a, assume_symmetric=True)

    def __repr__(self):
        return f"DenseSymmetricTensor(order={self.order}, dim={self.dim})"


def symmetrize(raw) -> DenseSymmetricTensor:
    """Average ``raw`` over all permutations of its index tuple."""
    return DenseSymmetricTensor(raw)


def _contract(t: DenseSymmetricTensor, x: np.ndarray, times: int) -> np.ndarray:
    # ``@`` contracts the trailing axis; fixed order keeps results deterministic.
    v = t.entries
    for _ in range(times):
        v = v @ x
    return v


def txr(t: DenseSymmetricTensor, x) -> float:
    """Scalar ``T x^r``."""
    x = t._check(x)
    return float(_contract(t, x, t.order))


def txr1(t: DenseSymmetricTensor, x) -> np.ndarray:
    """Vector ``T x^{r-1}``."""
    x = t._check(x)
    return np.asarray(_contract(t, x, t.order - 1), dtype=np.float64)


def txr2(t: DenseSymmetricTensor, x) -> np.ndarray:
    """Matrix ``T x^{r-2}``; symmetric when ``t`` is."""
    x = t._check(x)
    if t.order < 2:
        raise ValueError("T x^{r-2} needs order >= 2")
    m = np.array(_contract(t, x, t.order - 2), dtype=np.float64)
    return 0.5 * (m + m.T)


def txr_diff(t: DenseSymmetricTensor, x, y) -> float:
    """
    ``T y^r - T x^r`` without cancellation.

    Uses ``sum_s T(y, .., y, d, x, .., x)`` with ``d = y - x`` in slot s, so
    the error scales with ``|d|`` instead of with ``T x^r``.
    """
    x = t._check(x)
    y = t._check(y)
    d = y - x
    r = t.order
    total = 0.0
    for s in range(r):
        v = t.entries
        for _ in range(r - 1 - s):
            v = v @ x
        v = v @ d
        for _ in range(s):
            v = v @ y
        total += float(v)
    return total


def power_diff(x: np.ndarray, y: np.ndarray, k: int) -> np.ndarray:
    """Elementwise ``y**k - x**k`` as ``(y - x) * sum_j y**j x**(k-1-j)``."""
    acc = np.zeros_like(x)
    for j in range(k):
        acc += y**j * x ** (k - 1 - j)
    return (y - x) * acc


def identity_tensor(order: int, dim: int) -> DenseSymmetricTensor:
    """Diagonal tensor with unit diagonal entries."""
    a = np.zeros((dim,) * order)
    idx = np.arange(dim)
    a[(idx,) * order] = 1.0
    return DenseSymmetricTensor(a, assume_symmetric=True)


def diagonal_tensor(order: int, diag) -> DenseSymmetricTensor:
    diag = np.asarray(diag, dtype=np.float64)
    a = np.zeros((diag.size,) * order)
    idx = np.arange(diag.size)
    a[(idx,) * order] = diag
    return DenseSymmetricTensor(a, assume_symmetric=True)


def qi_example(alpha: float) -> DenseSymmetricTensor:
    """
    A standard order-4, dimension-2 test tensor.

    ``a_1111 = 3``, ``a_2222 = 1`` and the six permutations of ``a_1122`` equal
    ``alpha``; all other entries vanish.
    """
    a = np.zeros((2, 2, 2, 2))
    a[0, 0, 0, 0] = 3.0
    a[1, 1, 1, 1] = 1.0
    for idx in set(permutations((0, 0, 1, 1))):
        a[idx] = alpha
    return DenseSymmetricTensor(a, assume_symmetric=True)


def load_tensor(path) -> DenseSymmetricTensor:
    """
    Read the dense tensor text format.

    Header ``r n [symmetric]`` followed by lines ``i1 ... ir value`` with
    1-based indices. Unlisted entries are zero. Without the ``symmetric``
    keyword the listed entries are symmetrized by averaging; with it they
    must already form a symmetric tensor.
    """
    lines = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise TensorFormatError("empty tensor file")
    head = lines[0].split()
    if len(head) not in (2, 3) or (len(head) == 3 and head[2].lower() != "symmetric"):
        raise TensorFormatError(f"bad header line: {lines[0]!r}")
    try:
        r, n = int(head[0]), int(head[1])
    except ValueError as exc:
        raise TensorFormatError(f"bad header line: {lines[0]!r}") from exc
    if r < 1 or n < 1:
        raise TensorFormatError("order and dimension must be positive")
    declared = len(head) == 3
    if float(n) ** r > 1e7:
        raise TensorSizeError(f"dense tensor with n^r = {n}^{r} exceeds the size budget")
    a = np.zeros((n,) * r)
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != r + 1:
            raise TensorFormatError(f"line {lineno}: expected {r} indices and a value")
        try:
            idx = tuple(int(p) - 1 for p in parts[:r])
            val = float(parts[r])
        except ValueError as exc:
            raise TensorFormatError(f"line {lineno}: {exc}") from exc
        if any(i < 0 or i >= n for i in idx):
            raise TensorFormatError(f"line {lineno}: index out of range 1..{n}")
        if not np.isfinite(val):
            raise TensorFormatError(f"line {lineno}: nonfinite value")
        a[idx] = val
    t = DenseSymmetricTensor(a, assume_symmetric=declared)
    if declared and not t.is_symmetric(tol=1e-12 * max(1.0, float(np.max(np.abs(a))))):
        raise TensorFormatError("file declares 'symmetric' but entries are not symmetric")
    return t


def save_tensor(t: DenseSymmetricTensor, path) -> None:
    """Write every nonzero entry with a ``symmetric`` header."""
    with open(path, "w") as fh:
        fh.write(f"{t.order} {t.dim} symmetric\n")
        for idx in zip(*np.nonzero(t.entries)):
            ids = " ".join(str(i + 1) for i in idx)
            fh.write(f"{ids} {float(t.entries[idx])!r}\n")
