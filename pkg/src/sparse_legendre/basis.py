"""Orthonormal Legendre polynomials, the envelope bound and index sets.

Polynomials are normalized with respect to the uniform *probability* measure
on [-1, 1] (density 1/2), so ``L_j(1) = sqrt(2j + 1)``.  Multivariate
polynomials are tensor products on [-1, 1]^d.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DOMAIN_TOL = 1e-12
MAX_INDEX_SET_SIZE = 10**6

ENVELOPE_CONST = 2.0 / math.sqrt(math.pi)


@dataclass(frozen=True)
class IndexSet:
    """Ordered, duplicate-free collection of multi-indices of dimension ``dim``.

    ``indices`` is an ``(N, dim)`` integer array; row ``k`` is the multi-index
    of column ``k`` of every sampling matrix built from this set.
    """

    indices: np.ndarray
    label: str = ""

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.ndim == 1:
            idx = idx[:, None]
        if idx.ndim != 2 or idx.shape[0] < 1 or idx.shape[1] < 1:
            raise ValueError("an index set needs at least one multi-index of dimension >= 1")
        if np.any(idx < 0):
            raise ValueError("multi-indices must be nonnegative")
        if len({tuple(r) for r in idx.tolist()}) != idx.shape[0]:
            raise ValueError("duplicate multi-indices")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    @classmethod
    def from_list(cls, indices: Iterable[int | Sequence[int]], label: str = "") -> "IndexSet":
        rows = [(i,) if np.isscalar(i) else tuple(i) for i in indices]
        return cls(np.array(rows, dtype=np.int64), label=label)

    @property
    def dim(self) -> int:
        return self.indices.shape[1]

    @property
    def size(self) -> int:
        return self.indices.shape[0]

    def __len__(self):
        return self.size

    def __iter__(self):
        return (tuple(r) for r in self.indices.tolist())

    def max_degree(self) -> int:
        return int(self.indices.max())


def _check_domain(y, tol: float = DOMAIN_TOL) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(y)):
        raise ValueError("points must be finite")
    if np.any(np.abs(y) > 1.0 + tol):
        raise ValueError(f"points outside [-1, 1] (max |y| = {np.abs(y).max()!r})")
    return np.clip(y, -1.0, 1.0)


def legendre_table(max_degree: int, y, tol: float = DOMAIN_TOL) -> np.ndarray:
    """Values ``L_0(y), ..., L_n(y)`` stacked along a new leading axis.

    Uses the three-term recurrence of the orthonormal polynomials directly,
    so intermediate values stay of size ``sqrt(2j+1)`` up to high degree.

    Parameters
    ----------
    max_degree : int
        Highest degree ``n`` to evaluate.
    y : array_like
        Points in [-1, 1]; values within ``tol`` outside are clamped.

    Returns
    -------
    ndarray
        Shape ``(n + 1, *y.shape)``.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    y = _check_domain(y, tol)
    out = np.empty((max_degree + 1,) + y.shape)
    out[0] = 1.0
    if max_degree >= 1:
        out[1] = math.sqrt(3.0) * y
    for j in range(2, max_degree + 1):
        a = math.sqrt((2 * j + 1) * (2 * j - 1)) / j
        b = (j - 1) / j * math.sqrt((2 * j + 1) / (2 * j - 3))
        out[j] = a * y * out[j - 1] - b * out[j - 2]
    return out


def iter_legendre(max_degree: int, y, tol: float = DOMAIN_TOL):
    """Yield ``(j, L_j(y))`` for ``j = 0..max_degree`` keeping two rows in memory."""
    y = _check_domain(y, tol)
    prev = np.ones_like(y)
    yield 0, prev
    if max_degree < 1:
        return
    cur = math.sqrt(3.0) * y
    yield 1, cur
    for j in range(2, max_degree + 1):
        a = math.sqrt((2 * j + 1) * (2 * j - 1)) / j
        b = (j - 1) / j * math.sqrt((2 * j + 1) / (2 * j - 3))
        prev, cur = cur, a * y * cur - b * prev
        yield j, cur


def eval_legendre_1d(j: int, y, tol: float = DOMAIN_TOL):
    """Orthonormal Legendre polynomial ``L_j`` at ``y`` (scalar or array)."""
    if j < 0 or int(j) != j:
        raise ValueError("degree must be a nonnegative integer")
    vals = legendre_table(int(j), y, tol)[int(j)]
    return float(vals) if vals.ndim == 0 else vals


def eval_legendre_multi(j: Sequence[int], y: Sequence[float], tol: float = DOMAIN_TOL) -> float:
    """Tensor-product polynomial ``prod_k L_{j_k}(y_k)`` at a single point."""
    j = tuple(int(v) for v in j)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if y.ndim != 1 or len(j) != y.shape[0]:
        raise ValueError(f"dimension mismatch: index has {len(j)} entries, point has {y.size}")
    val = 1.0
    for jk, yk in zip(j, y):
        val *= eval_legendre_1d(jk, yk, tol)
    return val


def legendre_matrix(J: IndexSet, points, tol: float = DOMAIN_TOL) -> np.ndarray:
    """Matrix ``V[i, k] = L_{J[k]}(y_i)`` of shape ``(m, N)``.

    One recurrence sweep per coordinate up to the largest degree used in
    that coordinate; the sweeps are shared by all indices.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None] if J.dim == 1 else pts[None, :]
    if pts.shape[1] != J.dim:
        raise ValueError(f"dimension mismatch: index set has d={J.dim}, points have d={pts.shape[1]}")
    V = np.ones((pts.shape[0], J.size))
    for k in range(J.dim):
        col = J.indices[:, k]
        table = legendre_table(int(col.max()), pts[:, k], tol)
        V *= table[col].T
    return V


def envelope(y) -> np.ndarray | float:
    """Envelope ``Omega(y) = prod_k (2/sqrt(pi)) (1 - y_k^2)^(-1/4)``.

    ``y`` is a d-vector, or an ``(m, d)`` array for m points.  Raises
    ``ValueError`` on points with a coordinate at +-1 where it diverges.
    """
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(y) >= 1.0):
        raise ValueError("envelope is singular at |y_k| = 1")
    vals = envelope_unchecked(y)
    return float(vals) if np.ndim(vals) == 0 else vals


def envelope_unchecked(y) -> np.ndarray:
    """Like :func:`envelope` but returns ``inf`` on the boundary."""
    y = np.asarray(y, dtype=float)
    if y.ndim == 0:
        y = y[None]
    one_minus = np.clip(1.0 - y * y, 0.0, None)
    with np.errstate(divide="ignore"):
        per = ENVELOPE_CONST * one_minus ** -0.25
    return np.prod(per, axis=-1)


def eval_expansion(z, J: IndexSet, y) -> float:
    """Evaluate ``psi(y, z) = sum_k z_k L_{J[k]}(y)`` at one point."""
    z = np.asarray(z, dtype=float)
    if z.shape != (J.size,):
        raise ValueError(f"coefficient length {z.shape} does not match N={J.size}")
    y = np.atleast_1d(np.asarray(y, dtype=float))
    return float(legendre_matrix(J, y[None, :])[0] @ z)


def make_window_set(a: int, b: int) -> IndexSet:
    """Contiguous 1d degree window ``{a, a+1, ..., b}``."""
    if a < 0 or b < a:
        raise ValueError("need 0 <= a <= b")
    return IndexSet(np.arange(a, b + 1)[:, None], label=f"window[{a},{b}]")


def make_total_degree_set(d: int, w: int, cap: int = MAX_INDEX_SET_SIZE) -> IndexSet:
    """All multi-indices in dimension ``d`` with total degree at most ``w``, lexicographic."""
    if d < 1 or w < 0:
        raise ValueError("need d >= 1 and w >= 0")
    n = math.comb(w + d, d)
    if n > cap:
        raise ValueError(f"total-degree set has {n} indices, exceeding the cap {cap}")
    rows = [r for r in itertools.product(range(w + 1), repeat=d) if sum(r) <= w]
    return IndexSet(np.array(rows, dtype=np.int64), label=f"TD(d={d},w={w})")
