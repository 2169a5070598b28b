"""l1 recovery: basis pursuit, basis pursuit denoising and a brute-force l0 oracle.

Both problems are solved with ADMM (Douglas-Rachford splitting) built from
two exact proximal maps, soft-thresholding for the l1 norm and an orthogonal
projection for the data constraint:

* ``solve_bp``:   minimize ||z||_1  subject to  A z = g
* ``solve_bpdn``: minimize ||z||_1  subject to  ||A z - g||_2 <= eta

The affine projection uses a rank-truncated SVD of ``A`` so near-duplicate
sample points (rows) do not blow up the iteration.  Every ``window``
iterations BP tries to *certify* the current iterate: it re-solves least
squares on the active support and builds a dual point from the ADMM
multipliers.  If the primal point is feasible and the duality gap is below
``cert_tol`` the polished point is returned; it is optimal up to that gap.
Otherwise the run stops on the stagnation rule (feasibility plus objective
change over one window) or on ``max_iters``; the iterate is then replaced by a
least-squares refit on one of its thresholded supports if that refit is
feasible with a smaller l1 norm.  Such a stop carries no optimality
certificate (``certified=False``).

A first-order primal-dual (Chambolle-Pock) iteration with power-method step
sizes is available as ``method="pdhg"``; it is slower and mostly serves as
an independent cross-check of the ADMM path.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from .measurement import SparseSignal

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    """Stopping rules and step parameters shared by all solvers."""

    max_iters: int = 50_000
    feas_tol: float = 1e-9
    gap_tol: float = 1e-10
    step_scale: float = 0.99
    window: int = 50
    cert_tol: float = 1e-9
    rank_tol: float = 1e-12
    method: str = "admm"

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        for name in ("feas_tol", "gap_tol", "cert_tol", "rank_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.step_scale <= 1:
            raise ValueError("step_scale must lie in (0, 1]")
        if self.method not in ("admm", "pdhg"):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass
class RecoveryResult:
    solution: np.ndarray
    iterations: int
    primal_residual: float
    objective: float
    converged: bool
    certified: bool = False
    message: str = ""


def soft_threshold(v, t):
    """Proximal map of ``t * ||.||_1``."""
    v = np.asarray(v, dtype=float)
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def project_ball(v, center, radius):
    """Euclidean projection of ``v`` onto the ball ``B(center, radius)``."""
    d = v - center
    nd = np.linalg.norm(d)
    if nd <= radius:
        return v
    return center + d * (radius / nd)


def power_norm(A, iters: int = 20, seed: int = 0) -> float:
    """Estimate of the spectral norm ``||A||_2`` by power iteration."""
    A = np.asarray(A, dtype=float)
    v = np.random.default_rng(seed).standard_normal(A.shape[1])
    nv = np.linalg.norm(v)
    if nv == 0:
        return 0.0
    v /= nv
    est = 0.0
    for _ in range(iters):
        w = A.T @ (A @ v)
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        est = math.sqrt(nw)
        v = w / nw
    return est


def _check_inputs(A, g):
    A = np.asarray(A, dtype=float)
    g = np.asarray(g, dtype=float).ravel()
    if A.ndim != 2 or A.shape[0] != g.shape[0]:
        raise ValueError(f"shape mismatch: A is {A.shape}, g has length {g.shape[0]}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(g))):
        raise ValueError("A and g must be finite")
    return A, g


class _RangeSplit:
    """Truncated SVD of ``A`` with the maps needed by the splitting schemes."""

    def __init__(self, A, rank_tol):
        U, s, Vt = np.linalg.svd(A, full_matrices=False)
        keep = s > rank_tol * (s[0] if s.size else 0.0)
        self.U = U[:, keep]
        self.s = s[keep]
        self.Vt = Vt[keep]
        self.rank = int(keep.sum())

    def min_norm_solution(self, g):
        return self.Vt.T @ ((self.U.T @ g) / self.s)

    def project_nullspace(self, v):
        return v - self.Vt.T @ (self.Vt @ v)

    def lstsq_dual(self, y, cutoff=0.0):
        """Least-squares solution ``w`` of ``A^T w = y``.

        Singular values below ``cutoff * s_max`` are dropped, which keeps
        ``w`` small when ``y`` is only approximately in the row space.
        """
        keep = self.s > cutoff * self.s[0]
        return self.U[:, keep] @ ((self.Vt[keep] @ y) / self.s[keep])


def _feasibility(A, z, g):
    return float(np.linalg.norm(A @ z - g))


def _certify_bp(A, g, z, y, split, cfg):
    """Try to turn iterate ``z`` and multiplier ``y`` into a certified optimum.

    Returns ``(point, gap)`` or ``None``.  ``gap`` is the relative duality
    gap between the polished primal point and a scaled dual-feasible point.
    """
    a = np.abs(z)
    top = a.max() if a.size else 0.0
    if top == 0.0:
        return None
    m = A.shape[0]
    gnorm = np.linalg.norm(g)
    anorm = float(split.s[0])
    duals = [split.lstsq_dual(y), split.lstsq_dual(y, 1e-6)]
    tried = set()
    for rel in (0.0, 1e-10, 1e-7, 1e-4):
        S = np.flatnonzero(a > rel * top)
        key = tuple(S)
        if key in tried or S.size == 0 or S.size > m:
            continue
        tried.add(key)
        AS = A[:, S]
        coef, _, rank, _ = np.linalg.lstsq(AS, g, rcond=None)
        if rank < S.size:
            continue
        p = np.zeros_like(z)
        p[S] = coef
        if np.linalg.norm(AS @ coef - g) > cfg.feas_tol * (1.0 + gnorm):
            continue
        sg = np.sign(coef)
        if np.any(sg == 0):
            continue
        primal = float(np.abs(coef).sum())
        res = float(np.linalg.norm(AS @ coef - g))
        slack = res + 64 * np.finfo(float).eps * (gnorm + anorm * np.linalg.norm(coef))
        # dual candidates: the multiplier (plain and regularized inverse)
        # corrected on S, and the minimum-norm solution of A_S^T w = sign(coef)
        cands = [w0 + np.linalg.lstsq(AS.T, sg - AS.T @ w0, rcond=None)[0] for w0 in duals]
        cands.append(np.linalg.lstsq(AS.T, sg, rcond=None)[0])
        for w in cands:
            scale = max(1.0, float(np.abs(A.T @ w).max()))
            gap = (primal - float(g @ w) / scale) / primal
            # a huge dual vector (ill-conditioned A) makes g @ w unreliable:
            # charge the primal residual and the rounding to the gap
            err = float(np.linalg.norm(w)) * slack / (scale * primal)
            if -cfg.cert_tol <= gap and gap + err <= cfg.cert_tol:
                return p, gap
    return None


def _polish_bp(A, g, z, feas_bound):
    """Best feasible point among ``z`` and least-squares refits on its supports.

    Used when certification fails: a refit on the thresholded support of a
    slowly converging iterate is often feasible with a smaller l1 norm.
    Only a candidate with a strictly smaller l1 norm replaces ``z``.
    """
    best, best_obj = z, float(np.abs(z).sum())
    a = np.abs(z)
    top = a.max() if a.size else 0.0
    if top == 0.0:
        return best
    tried = set()
    for rel in (1e-10, 1e-7, 1e-5, 1e-4, 1e-3):
        S = np.flatnonzero(a > rel * top)
        key = tuple(S)
        if key in tried or S.size == 0 or S.size > A.shape[0]:
            continue
        tried.add(key)
        coef = np.linalg.lstsq(A[:, S], g, rcond=None)[0]
        p = np.zeros_like(z)
        p[S] = coef
        obj = float(np.abs(coef).sum())
        if _feasibility(A, p, g) <= feas_bound and obj < best_obj:
            best, best_obj = p, obj
    return best


def _zero_solution(A, g, cfg, iters=0):
    z = np.zeros(A.shape[1])
    res = _feasibility(A, z, g)
    return RecoveryResult(z, iters, res, 0.0, True, certified=True, message="zero solution")


def solve_bp(A, g, cfg: SolverConfig | None = None) -> RecoveryResult:
    """Basis pursuit: ``argmin ||z||_1`` subject to ``A z = g``.

    Parameters
    ----------
    A : (m, N) array_like
    g : (m,) array_like
    cfg : SolverConfig, optional

    Returns
    -------
    RecoveryResult
        ``converged`` is False if the iteration budget ran out or the system
        is inconsistent (``message`` says which).
    """
    cfg = cfg or SolverConfig()
    A, g = _check_inputs(A, g)
    if not np.any(g):
        return _zero_solution(A, g, cfg)
    if not np.any(A):
        z = np.zeros(A.shape[1])
        return RecoveryResult(z, 0, float(np.linalg.norm(g)), 0.0, False,
                              message="infeasible: A is zero and g is not")
    if cfg.method == "pdhg":
        return _pdhg(A, g, 0.0, cfg)
    return _admm_bp(A, g, cfg)


def _admm_bp(A, g, cfg):
    split = _RangeSplit(A, cfg.rank_tol)
    gnorm = float(np.linalg.norm(g))
    feas_bound = cfg.feas_tol * (1.0 + gnorm)
    x0 = split.min_norm_solution(g)
    if _feasibility(A, x0, g) > feas_bound:
        return RecoveryResult(x0, 0, _feasibility(A, x0, g), float(np.abs(x0).sum()), False,
                              message="infeasible: g is not in the range of A")

    lam = 0.1 * float(np.abs(x0).max())  # threshold = 1 / penalty
    z = x0.copy()
    u = np.zeros_like(z)
    prev_obj = math.inf
    x = x0
    for it in range(1, cfg.max_iters + 1):
        x = split.project_nullspace(z - u) + x0
        v = x + u
        z_old = z
        z = soft_threshold(v, lam)
        u = v - z

        if it % 10 == 0:
            r = np.linalg.norm(x - z)
            s = np.linalg.norm(z - z_old)
            if r > 5.0 * s:
                lam *= 0.5
                u *= 0.5
            elif s > 5.0 * r:
                lam *= 2.0
                u *= 2.0

        if it % cfg.window == 0:
            cert = _certify_bp(A, g, z, u / lam, split, cfg)
            if cert is not None:
                p, gap = cert
                return RecoveryResult(p, it, _feasibility(A, p, g), float(np.abs(p).sum()), True,
                                      certified=True, message=f"certified, gap {gap:.2e}")
            obj = float(np.abs(z).sum())
            res = _feasibility(A, z, g)
            if res <= feas_bound and abs(prev_obj - obj) <= cfg.gap_tol * (1.0 + obj):
                p = _polish_bp(A, g, z, feas_bound)
                return RecoveryResult(p, it, _feasibility(A, p, g), float(np.abs(p).sum()), True,
                                      message="stagnation" + (", polished" if p is not z else ""))
            prev_obj = obj

    # x is exactly feasible; z is the sparse iterate
    cand = z if _feasibility(A, z, g) <= feas_bound else x
    cand = _polish_bp(A, g, cand, feas_bound)
    return RecoveryResult(cand, cfg.max_iters, _feasibility(A, cand, g), float(np.abs(cand).sum()),
                          False, message="iteration budget exhausted")


def solve_bpdn(A, g, eta: float, cfg: SolverConfig | None = None) -> RecoveryResult:
    """Basis pursuit denoising: ``argmin ||z||_1`` subject to ``||A z - g||_2 <= eta``.

    ``eta = 0`` is delegated to :func:`solve_bp`.
    """
    cfg = cfg or SolverConfig()
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    if eta == 0:
        return solve_bp(A, g, cfg)
    A, g = _check_inputs(A, g)
    if np.linalg.norm(g) <= eta:
        return _zero_solution(A, g, cfg)
    if not np.any(A):
        z = np.zeros(A.shape[1])
        return RecoveryResult(z, 0, float(np.linalg.norm(g)), 0.0, False,
                              message="infeasible: A is zero and ||g|| > eta")
    if cfg.method == "pdhg":
        return _pdhg(A, g, eta, cfg)
    return _admm_bpdn(A, g, eta, cfg)


def _bpdn_ok(A, z, g, eta, cfg):
    res = _feasibility(A, z, g)
    return res, res <= eta * (1.0 + cfg.feas_tol) + cfg.feas_tol


def _admm_bpdn(A, g, eta, cfg):
    # split v = (x, w) = (z, A z); F(v) = ||x||_1 + indicator(||w - g|| <= eta)
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    shrink = s * s / (1.0 + s * s)

    def solve_normal(b):  # (I + A^T A)^{-1} b
        return b - Vt.T @ (shrink * (Vt @ b))

    N = A.shape[1]
    z = np.zeros(N)
    x = np.zeros(N)
    w = project_ball(np.zeros_like(g), g, eta)
    ux = np.zeros(N)
    uw = np.zeros_like(g)
    lam = 0.1 * float(np.abs(A.T @ g).max()) / max(float(s[0]) ** 2, 1e-300)
    prev_obj = math.inf
    for it in range(1, cfg.max_iters + 1):
        z = solve_normal((x - ux) + A.T @ (w - uw))
        Az = A @ z
        x_old, w_old = x, w
        x = soft_threshold(z + ux, lam)
        w = project_ball(Az + uw, g, eta)
        ux += z - x
        uw += Az - w

        if it % 10 == 0:
            r = math.hypot(np.linalg.norm(z - x), np.linalg.norm(Az - w))
            sd = np.linalg.norm((x - x_old) + A.T @ (w - w_old))
            if r > 5.0 * sd:
                lam *= 0.5
                ux *= 0.5
                uw *= 0.5
            elif sd > 5.0 * r:
                lam *= 2.0
                ux *= 2.0
                uw *= 2.0

        if it % cfg.window == 0:
            obj = float(np.abs(x).sum())
            res, ok = _bpdn_ok(A, x, g, eta, cfg)
            if ok and abs(prev_obj - obj) <= cfg.gap_tol * (1.0 + obj):
                return RecoveryResult(x, it, res, obj, True, message="stagnation")
            prev_obj = obj
    res, ok = _bpdn_ok(A, x, g, eta, cfg)
    return RecoveryResult(x, cfg.max_iters, res, float(np.abs(x).sum()), False,
                          message="iteration budget exhausted")


def _pdhg(A, g, eta, cfg):
    """Chambolle-Pock for ``min ||z||_1 + indicator(||A z - g|| <= eta)``."""
    L = 1.01 * power_norm(A, 20)
    tau = sigma = cfg.step_scale / L
    N = A.shape[1]
    x = np.zeros(N)
    y = np.zeros_like(g)
    gnorm = float(np.linalg.norm(g))
    prev_obj = math.inf
    for it in range(1, cfg.max_iters + 1):
        x_new = soft_threshold(x - tau * (A.T @ y), tau)
        xbar = 2.0 * x_new - x
        x = x_new
        yt = y + sigma * (A @ xbar)
        # prox of sigma * F^*, F = indicator of the ball B(g, eta), via Moreau
        y = yt - sigma * project_ball(yt / sigma, g, eta)
        if it % cfg.window == 0:
            obj = float(np.abs(x).sum())
            if eta == 0:
                res = _feasibility(A, x, g)
                ok = res <= cfg.feas_tol * (1.0 + gnorm)
            else:
                res, ok = _bpdn_ok(A, x, g, eta, cfg)
            if ok and abs(prev_obj - obj) <= cfg.gap_tol * (1.0 + obj):
                return RecoveryResult(x, it, res, obj, True, message="stagnation")
            prev_obj = obj
    res = _feasibility(A, x, g)
    return RecoveryResult(x, cfg.max_iters, res, float(np.abs(x).sum()), False,
                          message="iteration budget exhausted")


def l0_oracle(A, g, s_max: int, tol: float = 1e-10) -> SparseSignal | None:
    """Sparsest exact fit by exhaustive support enumeration.

    Tries every support of size ``0, 1, ..., s_max`` and returns the first
    size for which some least-squares fit has residual at most
    ``tol * (1 + ||g||)``; among those the smallest residual wins.  Returns
    ``None`` when nothing fits.  Guarded to ``N <= 20`` and ``s_max <= 4``.
    """
    A, g = _check_inputs(A, g)
    N = A.shape[1]
    if N > 20 or s_max > 4 or s_max < 0:
        raise ValueError("l0_oracle is limited to N <= 20 and 0 <= s_max <= 4")
    bound = tol * (1.0 + np.linalg.norm(g))
    if np.linalg.norm(g) <= bound:
        return SparseSignal(N, np.array([], dtype=np.int64), np.array([]), seed=None)
    for k in range(1, s_max + 1):
        best = None
        for S in itertools.combinations(range(N), k):
            AS = A[:, S]
            coef = np.linalg.lstsq(AS, g, rcond=None)[0]
            res = np.linalg.norm(AS @ coef - g)
            if res <= bound and np.all(coef != 0) and (best is None or res < best[0]):
                best = (res, S, coef)
        if best is not None:
            return SparseSignal(N, np.array(best[1], dtype=np.int64), best[2], seed=None)
    return None


def recovery_metrics(c, result, success_tol: float = 1e-4):
    """Relative l2 / l1 errors of a recovered vector and the success flag.

    ``c`` may be a :class:`SparseSignal` or a dense vector; ``result`` a
    :class:`RecoveryResult` or a dense vector.  Success is ``rel_l2 <=
    success_tol`` (closed inequality).
    """
    c = c.dense() if isinstance(c, SparseSignal) else np.asarray(c, dtype=float)
    chat = result.solution if isinstance(result, RecoveryResult) else np.asarray(result, dtype=float)
    if c.shape != chat.shape:
        raise ValueError("length mismatch")
    diff = c - chat
    n2, n1 = np.linalg.norm(c), np.abs(c).sum()
    if n2 == 0:
        rel_l2 = 0.0 if not np.any(diff) else math.inf
        rel_l1 = rel_l2
    else:
        rel_l2 = float(np.linalg.norm(diff) / n2)
        rel_l1 = float(np.abs(diff).sum() / n1)
    return rel_l2, rel_l1, rel_l2 <= success_tol


def best_s_term_error(z, s: int) -> float:
    """l1 error of the best s-term approximation: sum of the N - s smallest |z_j|."""
    a = np.sort(np.abs(np.asarray(z, dtype=float)))
    if not 0 <= s <= a.size:
        raise ValueError("need 0 <= s <= N")
    return float(a[: a.size - s].sum())
