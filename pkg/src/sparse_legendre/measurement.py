"""Sampling matrices, sparse ground-truth signals and observations."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .basis import IndexSet, legendre_matrix
from .rng import generator


@dataclass(frozen=True)
class SensingMatrix:
    """Normalized sampling matrix ``A[i, k] = w(y_i) L_{J[k]}(y_i) / sqrt(m)``.

    ``w = 1`` unless ``preconditioned``.
    """

    matrix: np.ndarray
    preconditioned: bool = False
    index_id: str = ""
    sample_id: str = ""

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __matmul__(self, other):
        return self.matrix @ other


@dataclass(frozen=True)
class SparseSignal:
    """Coefficient vector of length ``N`` stored by support and values."""

    length: int
    support: np.ndarray
    values: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        sup = np.asarray(self.support, dtype=np.int64)
        val = np.asarray(self.values, dtype=float)
        if sup.shape != val.shape:
            raise ValueError("support and values differ in length")
        order = np.argsort(sup, kind="stable")
        sup, val = sup[order], val[order]
        if sup.size and (sup[0] < 0 or sup[-1] >= self.length or np.any(np.diff(sup) == 0)):
            raise ValueError("support must be distinct indices in [0, N)")
        if np.any(val == 0):
            raise ValueError("values on the support must be nonzero")
        object.__setattr__(self, "support", sup)
        object.__setattr__(self, "values", val)

    @property
    def sparsity(self) -> int:
        return int(self.support.size)

    def dense(self) -> np.ndarray:
        c = np.zeros(self.length)
        c[self.support] = self.values
        return c


@dataclass(frozen=True)
class Observation:
    values: np.ndarray
    noise_level: float = 0.0


def _sample_id(Q) -> str:
    return f"{Q.distribution}:{Q.seed}:{Q.m}x{Q.dim}"


def assemble(J: IndexSet, Q) -> SensingMatrix:
    """``A[i, k] = L_{J[k]}(y_i) / sqrt(m)`` for the points of sample set ``Q``."""
    if J.dim != Q.dim:
        raise ValueError(f"dimension mismatch: index set d={J.dim}, samples d={Q.dim}")
    V = legendre_matrix(J, Q.points)
    return SensingMatrix(V / math.sqrt(Q.m), False, J.label, _sample_id(Q))


def preconditioner(points) -> np.ndarray:
    """Weight ``(pi/2)^(d/2) prod_k (1 - y_k^2)^(1/4)`` at each row of ``points``."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    d = pts.shape[1]
    return (math.pi / 2.0) ** (d / 2.0) * np.prod(np.clip(1.0 - pts * pts, 0.0, None) ** 0.25, axis=1)


def assemble_preconditioned(J: IndexSet, Q) -> SensingMatrix:
    """Preconditioned matrix for Chebyshev (arcsine) samples.

    The rows are multiplied by :func:`preconditioner`; the weighted system
    is orthonormal under the Chebyshev measure and bounded by ``sqrt(2)^d``.
    """
    if Q.distribution != "chebyshev":
        raise ValueError(f"preconditioning expects Chebyshev samples, got {Q.distribution!r}")
    if J.dim != Q.dim:
        raise ValueError(f"dimension mismatch: index set d={J.dim}, samples d={Q.dim}")
    V = legendre_matrix(J, Q.points) * preconditioner(Q.points)[:, None]
    return SensingMatrix(V / math.sqrt(Q.m), True, J.label, _sample_id(Q))


def gen_sparse_signal(N: int, s: int, seed: int) -> SparseSignal:
    """Uniformly random support of size ``s``; standard normal values."""
    if not 1 <= s <= N:
        raise ValueError(f"need 1 <= s <= N, got s={s}, N={N}")
    rng = generator(seed)
    support = np.sort(rng.choice(N, size=s, replace=False))
    values = rng.standard_normal(s)
    while np.any(values == 0):
        bad = values == 0
        values[bad] = rng.standard_normal(int(bad.sum()))
    return SparseSignal(N, support, values, seed)


def observe(A, c, eta: float = 0.0, seed: int = 0) -> Observation:
    """``g = A c + e`` with ``||e||_2 = eta``, ``e`` uniform on the sphere."""
    M = np.asarray(A.matrix if isinstance(A, SensingMatrix) else A, dtype=float)
    cd = c.dense() if isinstance(c, SparseSignal) else np.asarray(c, dtype=float)
    if M.shape[1] != cd.shape[0]:
        raise ValueError(f"dimension mismatch: A has {M.shape[1]} columns, c has length {cd.shape[0]}")
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    g = M @ cd
    if eta > 0:
        u = generator(seed).standard_normal(M.shape[0])
        g = g + eta * u / np.linalg.norm(u)
    return Observation(g, float(eta))


# --- CSV ---------------------------------------------------------------------

def write_matrix_csv(A: SensingMatrix, path) -> None:
    """Header ``# m,N,preconditioned,index_id,sample_id`` then rows of entries."""
    with open(path, "w", newline="") as fh:
        fh.write("# m,N,preconditioned,index_id,sample_id\n")
        w = csv.writer(fh)
        # labels may contain commas, so the values line is csv-quoted too
        fh.write("# ")
        w.writerow([A.rows, A.cols, int(A.preconditioned), A.index_id, A.sample_id])
        for row in A.matrix:
            w.writerow([repr(float(v)) for v in row])


def read_matrix_csv(path) -> SensingMatrix:
    text = Path(path).read_text()
    lines = text.splitlines()
    m, N, pre, index_id, sample_id = next(csv.reader([lines[1][2:]]))
    M = np.loadtxt(io.StringIO("\n".join(lines[2:])), delimiter=",", ndmin=2)
    if M.shape != (int(m), int(N)):
        raise ValueError(f"{path}: header says {m}x{N}, found {M.shape}")
    return SensingMatrix(M, bool(int(pre)), index_id, sample_id)


def write_signal_csv(c: SparseSignal, path) -> None:
    """Header ``# N,s,seed`` then ``index,value`` rows for the support."""
    with open(path, "w", newline="") as fh:
        fh.write("# N,s,seed\n")
        fh.write(f"# {c.length},{c.sparsity},{'' if c.seed is None else c.seed}\n")
        w = csv.writer(fh)
        w.writerow(["index", "value"])
        for j, v in zip(c.support.tolist(), c.values.tolist()):
            w.writerow([j, repr(v)])


def read_signal_csv(path) -> SparseSignal:
    lines = Path(path).read_text().splitlines()
    N, _, seed = lines[1][2:].split(",")
    rows = list(csv.reader(lines[3:]))
    sup = [int(r[0]) for r in rows]
    val = [float(r[1]) for r in rows]
    return SparseSignal(int(N), np.array(sup, dtype=np.int64), np.array(val), int(seed) if seed else None)
