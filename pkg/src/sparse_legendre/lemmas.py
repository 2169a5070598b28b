"""Numerical checks of the lemma-level inequalities behind the recovery theory.

Each check produces a :class:`LemmaCheck` row holding the estimated
left-hand side, the bound, a 3-sigma half-width and a pass flag
(``lhs - sigma3 <= rhs``, or the mirrored test for lower bounds).

Integrals involving ``Omega^2`` have infinite variance under the uniform
measure, so they are estimated by importance sampling from the Chebyshev
(arcsine) measure: with ``y = cos(theta)``, ``theta`` uniform,

    E_uniform[f] = (pi/2)^d E_chebyshev[f(y) prod_k sqrt(1 - y_k^2)],

which turns the weighted integrands into bounded random variables.
The univariate integral is done by adaptive quadrature instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .basis import envelope_unchecked
from .rng import derive_seed, generator
from .sampling import draw_uniform, estimate_percentile_threshold, is_preferable, is_preferable_1d
from .theory import end_set_bound_multi, tail_bounds_multi, v_d_bounds

MIN_BUDGET = 100_000


@dataclass(frozen=True)
class LemmaConfig:
    """Budgets and parameter grids for :func:`lemma_validators`."""

    n_samples: int = 200_000
    seed: int = 0
    tail_mu_1d: tuple = (1.5, 2.0, 3.0)
    end_set_mass_1d: tuple = (0.04, 0.2, 1.0)
    integral_beta_1d: tuple = (1.0, 10.0, 50.0)
    taus: tuple = (0.0, 0.25, 0.5)
    dims: tuple = (2, 3)
    tail_mu_multi: tuple = (2.0, 3.0)
    end_set_mu_multi: tuple = (2.0, 4.0)
    v_d_r: tuple = (0.01, 0.1, 0.5)
    integral_beta_multi: tuple = (10.0, 50.0, 200.0)
    constant_dims: tuple = (2, 3)
    stable_dims: tuple = (2,)
    stability_band: float = 0.2
    good_set_m: int = 100
    good_set_gamma0: tuple = (0.5, 0.8)
    good_set_sets: int = 2000
    good_set_n_ref: int = 5000

    def __post_init__(self):
        if self.n_samples < MIN_BUDGET:
            raise ValueError(f"n_samples must be >= {MIN_BUDGET}")
        if self.good_set_sets * self.good_set_m < MIN_BUDGET:
            raise ValueError(f"good-set budget (sets x m) must be >= {MIN_BUDGET}")


@dataclass(frozen=True)
class LemmaCheck:
    lemma: str
    params: str
    lhs: float
    rhs: float
    sigma3: float
    passed: bool | None
    method: str = "mc"
    note: str = ""


def _upper(lemma, params, est, half, rhs, method="mc", note=""):
    return LemmaCheck(lemma, params, est, rhs, half, bool(est - half <= rhs), method, note)


def _lower(lemma, params, est, half, rhs, method="mc", note=""):
    # lower bound: rhs < lhs, checked as rhs < lhs + 3 sigma
    return LemmaCheck(lemma, params, est, rhs, half, bool(rhs < est + half), method, note)


def _mean_3sigma(x: np.ndarray) -> tuple[float, float]:
    return float(x.mean()), 3.0 * float(x.std(ddof=1)) / math.sqrt(x.size)


def _uniform(n, d, seed, label):
    return generator(derive_seed(seed, label)).uniform(-1.0, 1.0, size=(n, d))


def _chebyshev_sines(n, d, seed, label):
    """``sqrt(1 - y^2) = sin(theta)`` for Chebyshev points ``y = cos(theta)``."""
    theta = generator(derive_seed(seed, label)).uniform(0.0, math.pi, size=(n, d))
    return np.sin(theta)


# --- univariate --------------------------------------------------------------

def check_tail_1d(mu, cfg):
    y = _uniform(cfg.n_samples, 1, cfg.seed, f"tail1:{mu}")
    hit = (envelope_unchecked(y) >= mu).astype(float)
    est, half = _mean_3sigma(hit)
    return _upper("tail_1d", f"mu={mu}", est, half, 16.0 / (math.pi**2 * mu**4))


def end_set_integral_1d(mass: float) -> tuple[float, float]:
    """Integral of ``Omega^2`` over ``[1 - 2 mass, 1]`` under the uniform measure.

    Quadrature with the ``(1 - y)^(-1/2)`` singularity as an algebraic weight.
    """
    a = 1.0 - 2.0 * mass
    if a <= -1.0:
        # both endpoints singular: weight (1 + y)^(-1/2) (1 - y)^(-1/2)
        return integrate.quad(lambda y: 2.0 / math.pi, -1.0, 1.0, weight="alg", wvar=(-0.5, -0.5))[:2]
    f = lambda y: (2.0 / math.pi) / math.sqrt(1.0 + y)  # noqa: E731
    val, err = integrate.quad(f, a, 1.0, weight="alg", wvar=(0.0, -0.5), epsabs=1e-13, epsrel=1e-12)
    return val, err


def check_end_set_1d(mass, cfg):
    # the end interval carries the most Omega^2 among sets of equal mass
    n = cfg.n_samples
    s = _chebyshev_sines(n, 1, cfg.seed, f"end1:{mass}")[:, 0]
    sign = generator(derive_seed(cfg.seed, f"end1-sign:{mass}")).integers(0, 2, n) * 2 - 1
    y = sign * np.sqrt(1.0 - s * s)
    # Omega^2 * (pi/2) sqrt(1-y^2) == 2 identically
    w = np.where(y >= 1.0 - 2.0 * mass, 2.0, 0.0)
    est, half = _mean_3sigma(w)
    quad, _ = end_set_integral_1d(mass)
    return _upper("end_set_1d", f"mass={mass}", est, half, 2.0 * math.sqrt(mass),
                  note=f"quadrature={quad:.10g}")


def integral_1d(beta: float, tau: float) -> tuple[float, float]:
    """``int exp(-beta sqrt(1-y^2)) (1-y^2)^(-tau) d rho`` by quadrature in ``theta``."""
    f = lambda t: math.exp(-beta * math.sin(t)) * math.sin(t) ** (1.0 - 2.0 * tau)  # noqa: E731
    brk = [min(1.0 / beta, 1.0)] if beta > 1 else None
    val, err = integrate.quad(f, 0.0, math.pi / 2.0, points=brk, epsabs=1e-14, epsrel=1e-12, limit=200)
    return val, err


def integral_1d_bound(beta: float, tau: float) -> float:
    return 2.0 * special.gamma(2.0 - 2.0 * tau) * beta ** (2.0 * tau - 2.0)


def check_integral_1d(beta, tau, cfg):
    val, err = integral_1d(beta, tau)
    return _upper("integral_1d", f"beta={beta},tau={tau}", val, 3.0 * err,
                  integral_1d_bound(beta, tau), method="quad")


def check_good_set_1d(gamma0, cfg):
    n = cfg.good_set_sets
    acc = np.array([is_preferable_1d(draw_uniform(cfg.good_set_m, 1, derive_seed(cfg.seed, "good1", str(gamma0), i)), gamma0)
                    for i in range(n)], dtype=float)
    est = float(acc.mean())
    half = 3.0 * math.sqrt(gamma0 * (1.0 - gamma0) / n)
    return _lower("good_set_1d", f"m={cfg.good_set_m},gamma0={gamma0}", est, half, 1.0 - gamma0,
                  note="acceptance frequency of the analytic criterion")


# --- multivariate ------------------------------------------------------------

def check_tail_multi(mu, d, cfg):
    y = _uniform(cfg.n_samples, d, cfg.seed, f"tailm:{d}:{mu}")
    hit = (envelope_unchecked(y) >= mu).astype(float)
    est, half = _mean_3sigma(hit)
    lo, hi = tail_bounds_multi(mu, d)
    p = f"d={d},mu={mu}"
    return [_lower("tail_multi_lower", p, est, half, lo), _upper("tail_multi_upper", p, est, half, hi)]


def check_end_set_multi(mu, d, cfg):
    s = _chebyshev_sines(cfg.n_samples, d, cfg.seed, f"endm:{d}:{mu}")
    # Omega >= mu  <=>  prod sin^2 <= (2/sqrt(pi))^(4d) / mu^4
    r = 2.0 ** (4 * d) / (math.pi ** (2 * d) * mu**4)
    w = np.where(np.prod(s * s, axis=1) <= r, 2.0**d, 0.0)
    est, half = _mean_3sigma(w)
    return _upper("end_set_multi", f"d={d},mu={mu}", est, half, end_set_bound_multi(mu, d), method="mc-chebyshev")


def check_v_d(r, d, cfg):
    y = _uniform(cfg.n_samples, d, cfg.seed, f"vd:{d}:{r}")
    hit = (np.prod(1.0 - y * y, axis=1) <= r).astype(float)
    est, half = _mean_3sigma(hit)
    lo, hi = v_d_bounds(r, d)
    p = f"d={d},r={r}"
    return [_lower("v_d_lower", p, est, half, lo), _upper("v_d_upper", p, est, half, hi)]


def integral_multi_mc(beta, tau, d, n, seed) -> tuple[float, float]:
    """Importance-sampled estimate and 3-sigma half-width of the multivariate integral."""
    s = np.prod(_chebyshev_sines(n, d, seed, f"intm:{d}:{beta}:{tau}"), axis=1)
    f = (math.pi / 2.0) ** d * np.exp(-beta * s) * s ** (1.0 - 2.0 * tau)
    return _mean_3sigma(f)


def check_integral_multi(d, tau, cfg):
    rows = []
    consts = []
    for beta in cfg.integral_beta_multi:
        est, half = integral_multi_mc(beta, tau, d, cfg.n_samples, cfg.seed)
        scale = beta ** (2.0 * tau - 2.0) * math.log(beta) ** (d - 1)
        consts.append(est / scale)
        rows.append(LemmaCheck("integral_multi_constant", f"d={d},tau={tau},beta={beta}", est, scale,
                               half, None, "mc-chebyshev", note=f"C_hat={est / scale:.6g}"))
    c = np.array(consts)
    spread = float(np.max(np.abs(c / c.mean() - 1.0)))
    stable = bool(spread <= cfg.stability_band) if d in cfg.stable_dims else None
    rows.append(LemmaCheck("integral_multi_stability", f"d={d},tau={tau}", spread, cfg.stability_band,
                           0.0, stable, "mc-chebyshev",
                           note="max relative deviation of C_hat from its mean over beta"))
    return rows


def check_good_set_multi(gamma0, d, cfg):
    thr = estimate_percentile_threshold(cfg.good_set_m, d, gamma0, cfg.good_set_n_ref,
                                        derive_seed(cfg.seed, "good-ref", d))
    n = cfg.good_set_sets
    acc = np.array([is_preferable(draw_uniform(cfg.good_set_m, d, derive_seed(cfg.seed, "goodm", d, str(gamma0), i)),
                                  gamma0, thr) for i in range(n)], dtype=float)
    est = float(acc.mean())
    # fresh-set binomial error plus the error of the estimated quantile
    half = 3.0 * math.sqrt(gamma0 * (1.0 - gamma0) * (1.0 / n + 1.0 / cfg.good_set_n_ref))
    return _lower("good_set_multi", f"d={d},m={cfg.good_set_m},gamma0={gamma0}", est, half, 1.0 - gamma0,
                  note=f"percentile threshold={thr:.6g}")


def lemma_validators(config: LemmaConfig | None = None) -> list[LemmaCheck]:
    """Run every lemma check and return one row per inequality."""
    cfg = config or LemmaConfig()
    rows: list[LemmaCheck] = []
    rows += [check_tail_1d(mu, cfg) for mu in cfg.tail_mu_1d]
    rows += [check_end_set_1d(mass, cfg) for mass in cfg.end_set_mass_1d]
    rows += [check_integral_1d(b, t, cfg) for b in cfg.integral_beta_1d for t in cfg.taus]
    rows += [check_good_set_1d(g, cfg) for g in cfg.good_set_gamma0]
    for d in cfg.dims:
        for mu in cfg.tail_mu_multi:
            rows += check_tail_multi(mu, d, cfg)
        rows += [check_end_set_multi(mu, d, cfg) for mu in cfg.end_set_mu_multi]
        for r in cfg.v_d_r:
            rows += check_v_d(r, d, cfg)
    for d in cfg.constant_dims:
        for tau in cfg.taus:
            rows += check_integral_multi(d, tau, cfg)
    rows += [check_good_set_multi(g, 2, cfg) for g in cfg.good_set_gamma0]
    return rows


def all_passed(rows) -> bool:
    """True if no row has ``passed is False`` (report-only rows are ignored)."""
    return all(r.passed is not False for r in rows)
