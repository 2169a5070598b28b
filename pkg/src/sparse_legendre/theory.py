"""Analytic side: cone membership, restricted eigenvalues, error bounds,
sample-complexity formulas and the special functions ``H_d``, ``K_d``, ``v_d``.

The sample-complexity evaluators take a user-supplied constant ``C`` (default
1) in place of the non-explicit universal constant of the theory.  Their
values are only meaningful up to that constant; use them for scaling studies
and monotonicity checks, not as absolute sample counts.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .rng import derive_seed, generator


@dataclass(frozen=True)
class REParams:
    """Parameters of the restricted eigenvalue estimates.

    ``delta0 = 1 / (1 + alpha)`` is derived, never stored.
    """

    s: int
    alpha: float
    delta: float
    gamma: float = 0.1
    gamma0: float = 0.1
    N: int = 200
    d: int = 1
    C: float = 1.0

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be >= 1")
        if not self.alpha > 1:
            raise ValueError("alpha must exceed 1")
        for name in ("delta", "gamma", "gamma0"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        if self.N < 1 or self.d < 1:
            raise ValueError("N and d must be >= 1")
        if not self.C > 0:
            raise ValueError("C must be positive")

    @property
    def delta0(self) -> float:
        return 1.0 / (1.0 + self.alpha)

    @property
    def s_alpha(self) -> float:
        return (1.0 + self.alpha) ** 2 * self.s


# --- cone -------------------------------------------------------------------

@dataclass(frozen=True)
class ConeVector:
    """Vector ``z`` with a support ``S`` certifying ``z in C(s; alpha)``."""

    vector: np.ndarray
    witness_support: np.ndarray
    alpha: float


def _top_support(z, s):
    a = np.abs(z)
    # largest magnitudes first, lowest index among ties
    order = np.lexsort((np.arange(a.size), -a))
    return np.sort(order[:s])


def _cone_gap(z, S, alpha):
    mask = np.ones(z.size, dtype=bool)
    mask[S] = False
    tail = np.abs(z[mask]).sum()
    head = np.linalg.norm(z[S])
    return tail, alpha * math.sqrt(len(S)) * head


def cone_member(z, s: int, alpha: float) -> ConeVector | None:
    """Certificate of ``||z_{S^c}||_1 <= alpha sqrt(s) ||z_S||_2`` or None.

    The top-``s`` support (ties to the lowest index) minimizes the tail and
    maximizes the head at once, so testing it is equivalent to testing
    every support of size ``s``.
    """
    z = np.asarray(z, dtype=float).ravel()
    if not 1 <= s <= z.size:
        raise ValueError(f"need 1 <= s <= N, got s={s}, N={z.size}")
    S = _top_support(z, s)
    tail, bound = _cone_gap(z, S, alpha)
    if tail <= bound:
        return ConeVector(z, S, alpha)
    return None


def sample_cone(N: int, s: int, alpha: float, seed: int, u: float | None = None) -> ConeVector:
    """Random unit vector of ``C(s; alpha)``.

    Normal head on a random support ``S``, tail with l1 norm
    ``u * alpha * sqrt(s) * ||head||_2`` (``u`` uniform on [0, 1) unless
    given), then normalized.
    """
    if not 1 <= s <= N:
        raise ValueError(f"need 1 <= s <= N, got s={s}, N={N}")
    rng = generator(seed)
    S = np.sort(rng.choice(N, size=s, replace=False))
    z = np.zeros(N)
    head = rng.standard_normal(s)
    while not np.any(head):
        head = rng.standard_normal(s)
    z[S] = head
    if u is None:
        u = rng.random()
    rest = np.setdiff1d(np.arange(N), S)
    if rest.size and u > 0:
        t = rng.standard_normal(rest.size)
        nt = np.abs(t).sum()
        if nt > 0:
            z[rest] = t * (u * alpha * math.sqrt(s) * np.linalg.norm(head) / nt)
    z /= np.linalg.norm(z)
    return ConeVector(z, S, alpha)


# --- restricted eigenvalues -------------------------------------------------

EXHAUSTIVE_BUDGET = 100_000
RE_EXHAUSTIVE_BUDGET = 5000


def _min_eig_supports(G, supports) -> float:
    best = math.inf
    for start in range(0, len(supports), 4096):
        idx = np.asarray(supports[start:start + 4096])
        blocks = G[idx[:, :, None], idx[:, None, :]]
        best = min(best, float(np.linalg.eigvalsh(blocks)[:, 0].min()))
    return best


def sparse_min_eig(A, s: int, mode: str = "exhaustive", k: int = 200, seed: int = 0) -> float:
    """Smallest eigenvalue of ``A_S^T A_S`` over supports ``|S| = s``.

    ``mode="exhaustive"`` visits every support (at most 1e5 of them);
    ``mode="random"`` visits ``k`` distinct random supports, which is only
    an upper bound on the true minimum.
    """
    A = np.asarray(A, dtype=float)
    N = A.shape[1]
    if not 1 <= s <= N:
        raise ValueError(f"need 1 <= s <= N, got s={s}, N={N}")
    total = math.comb(N, s)
    G = A.T @ A
    if mode == "exhaustive":
        if total > EXHAUSTIVE_BUDGET:
            raise ValueError(f"budget exceeded: C({N},{s}) = {total} > {EXHAUSTIVE_BUDGET}")
        supports = list(itertools.combinations(range(N), s))
    elif mode == "random":
        if k < 1:
            raise ValueError("k must be >= 1")
        rng = generator(seed)
        seen: set[tuple[int, ...]] = set()
        target = min(k, total)
        while len(seen) < target:
            seen.add(tuple(np.sort(rng.choice(N, size=s, replace=False)).tolist()))
        supports = sorted(seen)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return _min_eig_supports(G, supports)


def empirical_re_constant(A, s: int, alpha: float, n_probes: int, seed: int) -> float:
    """Probe estimate of ``inf ||A z||_2^2`` over unit vectors of ``C(s; alpha)``.

    Returns the minimum over ``n_probes`` random cone vectors, together with
    every exactly ``s``-sparse minimizer when there are at most 5000
    supports.  This is an upper bound on the true infimum, not a certificate.
    """
    if n_probes < 1:
        raise ValueError("n_probes must be >= 1")
    A = np.asarray(A, dtype=float)
    N = A.shape[1]
    best = math.inf
    for i in range(n_probes):
        z = sample_cone(N, s, alpha, derive_seed(seed, "re-probe", i)).vector
        best = min(best, float(np.sum((A @ z) ** 2)))
    if math.comb(N, s) <= RE_EXHAUSTIVE_BUDGET:
        best = min(best, sparse_min_eig(A, s, "exhaustive"))
    return max(best, 0.0)


# --- error bounds -----------------------------------------------------------

def nsp_constants(alpha: float, delta: float) -> tuple[float, float]:
    """``(rho, tau) = (1/alpha, 1/sqrt(1 - delta))``."""
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    return 1.0 / alpha, 1.0 / math.sqrt(1.0 - delta)


def l1_error_bound(sigma_s: float, eta: float, s: int, alpha: float, delta: float) -> float:
    """Bound on ``||c - c#||_1`` for the noisy l1 decoder under the NSP."""
    if not alpha > 1:
        raise ValueError("alpha must exceed 1 (delta0 = 1/(1+alpha) < 1/2)")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    d0 = 1.0 / (1.0 + alpha)
    return (2.0 / (1.0 - 2.0 * d0)) * sigma_s + (4.0 / math.sqrt(1.0 - delta)) * (
        (1.0 - d0) / (1.0 - 2.0 * d0)) * eta * math.sqrt(s)


# --- sample complexity ------------------------------------------------------

def _log(x: float, what: str) -> float:
    """``log(x)`` for an argument that must exceed 1."""
    if not x > 1:
        raise ValueError(f"log argument {what} = {x:.6g} must exceed 1")
    return math.log(x)


def complexity_1d_terms(p: REParams, preferable: bool = False) -> tuple[float, float, float]:
    """The three candidates of the univariate bound, prefactor included."""
    if not preferable and not p.gamma + p.gamma0 < 1:
        raise ValueError("need gamma + gamma0 < 1")
    sad = p.s_alpha / p.delta**1.5
    L = _log(sad, "s_{alpha,delta}")
    L2N = _log(2.0 * p.N, "2N")
    g = (1.0 - p.gamma0) * p.gamma if preferable else p.gamma
    pre = p.C * (1.0 + p.alpha) ** 4 * p.s**2
    t1 = p.delta**-12 / p.gamma0 * L**2 * L2N**2
    t2 = p.delta**-7.5 * L**1.5 * L2N
    t3 = p.delta**-4 * L * _log(L / (g * p.delta), "log(s_{alpha,delta})/(gamma delta)")
    return pre * t1, pre * t2, pre * t3


def complexity_1d(p: REParams, preferable: bool = False) -> float:
    """Univariate sample count from the envelope-based RE estimate.

    ``preferable=True`` gives the variant for preferable sample sets, where
    ``gamma`` becomes ``(1 - gamma0) gamma`` in the last logarithm.
    """
    return max(complexity_1d_terms(p, preferable))


def multi_constants(d: int, C: float = 1.0) -> tuple[float, float, float, float]:
    """``(C_{d,1}, C_{d,2}, C_{d,3}, C_{d,4})`` of the multivariate bound."""
    f = math.factorial(d - 1)
    c1 = C * (4.0 / math.pi) ** (4 * d)
    c2 = C * (d + 1) / math.sqrt(f) * (64.0 * math.sqrt(2.0) / math.pi**2) ** d
    c3 = C * (d + 1) / f * (4.0 / math.pi) ** (2 * d)
    c4 = C * (d + 1) * float(d - 1) ** (d - 1) / f * 2.0 ** (4 * d) / math.pi ** (1.5 * d)
    return c1, c2, c3, c4


def complexity_multi_rhs(p: REParams, m: float, preferable: bool = False) -> float:
    """Right-hand side of the multivariate bound evaluated at ``m``."""
    if not preferable and not p.gamma + p.gamma0 < 1:
        raise ValueError("need gamma + gamma0 < 1")
    d = p.d
    c1, c2, c3, c4 = multi_constants(d, p.C)
    sa = p.s_alpha
    Ls = _log(c4 * sa**1.5 / p.delta**2, "C_{4,d} s_alpha^{3/2}/delta^2")
    L2N = _log(2.0 * p.N, "2N")
    g = (1.0 - p.gamma0) * p.gamma if preferable else p.gamma
    if d > 1:
        la = _log((math.pi / 4.0) ** d * math.sqrt(m / p.gamma0), "(pi/4)^d sqrt(m/gamma0)")
        lb = _log(p.C * m * (math.pi / 4.0) ** d, "C m (pi/4)^d")
        lc = _log(p.C * math.pi**d * m, "C pi^d m")
    else:
        la = lb = lc = 1.0
    t1 = c1 / (p.delta**12 * p.gamma0) * Ls**2 * L2N**2 * la ** (4 * d - 4)
    t2 = c2 / p.delta**7.5 * Ls**1.5 * L2N * lb ** (d - 1)
    t3 = c3 / p.delta**4 * Ls * _log(Ls / (g * p.delta), "log(.)/(gamma delta)") * lc ** (d - 1)
    return sa**2 * max(t1, t2, t3)


@dataclass(frozen=True)
class FixedPoint:
    m: float
    iterations: int
    residual: float


def complexity_multi(p: REParams, preferable: bool = False, rtol: float = 1e-9,
                     max_iter: int = 200, full_output: bool = False):
    """Multivariate sample count, solving ``m = RHS(m)`` by fixed-point iteration.

    The iteration starts at ``m0 = s_alpha^2`` and stops once the relative
    change is at most ``rtol``.  Raises ``RuntimeError`` if ``max_iter``
    iterations do not get there.
    """
    m = p.s_alpha**2
    for it in range(1, max_iter + 1):
        nxt = complexity_multi_rhs(p, m, preferable)
        if not math.isfinite(nxt):
            raise RuntimeError(f"fixed-point iteration diverged at iteration {it}")
        done = abs(nxt - m) <= rtol * m
        m = nxt
        if done:
            res = abs(m - complexity_multi_rhs(p, m, preferable)) / m
            if full_output:
                return FixedPoint(m, it, res)
            return m
    raise RuntimeError(f"fixed-point iteration did not converge in {max_iter} iterations (m = {m:.6g})")


def complexity_bos(p: REParams, theta: float) -> float:
    """Sample count for a bounded orthonormal system with uniform bound ``theta``."""
    if not theta >= 1:
        raise ValueError("theta must be >= 1")
    X = theta**2 * p.s_alpha / p.delta**2
    LX = _log(X, "Theta^2 s_alpha/delta^2")
    t1 = 2.0**5 / p.delta**4 * _log(40.0 * X * LX, "40 X log X") * _log(4.0 * p.N, "4N")
    t2 = (1.0 / p.delta) * _log(LX / (p.gamma * p.delta), "log(X)/(gamma delta)")
    return p.C * X * LX * max(t1, t2)


def complexity_bos_terms(p: REParams, theta: float) -> tuple[float, float]:
    X = theta**2 * p.s_alpha / p.delta**2
    LX = _log(X, "Theta^2 s_alpha/delta^2")
    t1 = 2.0**5 / p.delta**4 * _log(40.0 * X * LX, "40 X log X") * _log(4.0 * p.N, "4N")
    t2 = (1.0 / p.delta) * _log(LX / (p.gamma * p.delta), "log(X)/(gamma delta)")
    return p.C * X * LX * t1, p.C * X * LX * t2


# --- H_d, K_d, v_d ----------------------------------------------------------

def H_d(beta: float, d: int) -> float:
    """``beta * log(1/beta)^(d-1)`` for ``0 < beta < 1``."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if not 0 < beta < 1:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    return beta * math.log(1.0 / beta) ** (d - 1)


def K_d_max(d: int) -> float:
    """Supremum ``((d-1)/e)^(d-1)`` of the range where ``K_d`` is defined."""
    return ((d - 1) / math.e) ** (d - 1)


def K_d(M: float, d: int) -> float:
    """Inverse of ``H_d`` on its increasing branch ``(0, e^{-(d-1)})``.

    Bisection on the bracket [1e-300, e^{-(d-1)}].  Midpoints are geometric,
    so the result is accurate to a few ulps in relative terms (hence far
    below 1e-14 in absolute terms).
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if not 0 < M < K_d_max(d):
        raise ValueError(f"M = {M} outside (0, ((d-1)/e)^(d-1)) = (0, {K_d_max(d):.6g})")
    lo, hi = 1e-300, math.exp(-(d - 1))
    if H_d(lo, d) >= M:
        return lo
    while True:
        mid = math.sqrt(lo * hi)
        if not lo < mid < hi or hi - lo <= 4 * np.spacing(mid):
            break
        if H_d(mid, d) < M:
            lo = mid
        else:
            hi = mid
    return lo if abs(H_d(lo, d) - M) <= abs(H_d(hi, d) - M) else hi


def K_d_lower_bound(M: float, d: int) -> float:
    """Explicit lower bound ``M/(d-1)^(d-1) exp(-(d-1) sqrt(log((d-1)/M^(1/(d-1)))))``."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if not 0 < M < K_d_max(d):
        raise ValueError("M outside the range of K_d")
    q = d - 1
    return M / q**q * math.exp(-q * math.sqrt(math.log(q / M ** (1.0 / q))))


def v_1(r: float) -> float:
    """Exact ``v_1(r) = 1 - sqrt(1 - r)``."""
    if not 0 < r <= 1:
        raise ValueError("r must lie in (0, 1]")
    return 1.0 - math.sqrt(1.0 - r)


def v_d_bounds(r: float, d: int) -> tuple[float, float]:
    """Lower and upper bounds on ``v_d(r)`` for ``d >= 2``, ``0 < r < 1``."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    f = math.factorial(d - 1)
    lower = r / (2 * f) * math.log(1.0 / math.sqrt(r)) ** (d - 1)
    upper = r / f * math.log(2.0**d * math.e / math.sqrt(r)) ** (d - 1)
    return lower, upper


def _mc_blocks(n, seed, label, block=100_000):
    """Yield ``(size, generator)`` pairs covering ``n`` draws in fixed blocks."""
    for b, start in enumerate(range(0, n, block)):
        yield min(block, n - start), generator(derive_seed(seed, label, b))


def v_d_mc(r: float, d: int, n_samples: int = 100_000, seed: int = 0) -> tuple[float, float]:
    """Monte Carlo ``v_d(r) = P(prod_k (1 - y_k^2) <= r)`` under the uniform measure.

    Returns ``(estimate, half_width)`` where the half-width is 3 binomial
    standard errors.
    """
    if not 0 < r <= 1:
        raise ValueError("r must lie in (0, 1]")
    if n_samples < 10_000:
        raise ValueError("n_samples must be >= 1e4")
    hits = 0
    for size, rng in _mc_blocks(n_samples, seed, f"v_d:{d}"):
        y = rng.uniform(-1.0, 1.0, size=(size, d))
        hits += int(np.count_nonzero(np.prod(1.0 - y * y, axis=1) <= r))
    p = hits / n_samples
    return p, 3.0 * math.sqrt(max(p * (1.0 - p), 0.0) / n_samples)


def tail_bounds_multi(mu: float, d: int) -> tuple[float, float]:
    """Bounds on ``rho(Omega >= mu)`` for ``d >= 2``, ``mu >= 2^d / pi^(d/2)``."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if mu < 2.0**d / math.pi ** (d / 2):
        raise ValueError("mu below 2^d / pi^(d/2)")
    f = math.factorial(d - 1)
    lower = H_d(2.0 ** (4 * d) / (math.pi ** (2 * d) * mu**4), d) / (2**d * f)
    upper = 2.0 ** (d + 1) * math.e**2 / f * H_d(2.0 ** (2 * d) / (math.e**2 * math.pi ** (2 * d) * mu**4), d)
    return lower, upper


def end_set_bound_multi(mu: float, d: int) -> float:
    """Bound on the integral of ``Omega^2`` over ``{Omega >= mu}`` for ``d >= 2``."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if mu < 2.0**d / math.pi ** (d / 2):
        raise ValueError("mu below 2^d / pi^(d/2)")
    return (2.0 ** (4 * d) * (d + 1) / (math.pi ** (2 * d) * math.factorial(d - 1))
            * math.log(math.e * math.pi**d * mu**2) ** (d - 1) / mu**2)


def good_set_bound_multi(m: int, gamma0: float, d: int, C: float = 1.0) -> float:
    """Test-value bound for preferable ``d``-dimensional sets, up to ``C``."""
    x = (math.pi / 4.0) ** d * math.sqrt(m / gamma0)
    return C * (m / gamma0) ** 0.25 * (4.0 / math.pi) ** (2 * d) * _log(x, "(pi/4)^d sqrt(m/gamma0)") ** (d - 1)
