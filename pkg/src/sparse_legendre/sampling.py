"""Random sample sets, their test value and the preferable-set criteria.

The test value of ``Q = {y_1, ..., y_m}`` for a level ``gamma0`` is

    T(Q) = sum_i Z_i,   Z_i = Omega(y_i) * exp(-sqrt(m / gamma0) / (2 Omega(y_i)^2))

with ``Omega`` the Legendre envelope.  ``Z`` is increasing in ``Omega``, so
points close to the boundary of the cube raise ``T``; on the boundary itself
``Omega = inf`` and ``Z = inf``.  Small test values mark preferable sets.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .basis import envelope_unchecked
from .rng import derive_seed, generator

DISTRIBUTIONS = ("uniform", "chebyshev")


@dataclass
class SampleSet:
    """``m`` points in [-1, 1]^d with the provenance needed to redraw them."""

    points: np.ndarray
    distribution: str = "uniform"
    seed: int | None = None
    test_value: float | None = None
    gamma0: float | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise ValueError("a sample set needs at least one point")
        if np.any(np.abs(pts) > 1.0):
            raise ValueError("sample points must lie in [-1, 1]^d")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}")
        self.points = pts

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class TestStatistic:
    gamma0: float
    value: float
    per_sample: np.ndarray

    __test__ = False  # keep pytest from collecting this class


def draw_uniform(m: int, d: int, seed: int) -> SampleSet:
    """``m`` i.i.d. points, uniform on [-1, 1]^d."""
    if m < 1 or d < 1:
        raise ValueError("need m >= 1 and d >= 1")
    pts = generator(seed).uniform(-1.0, 1.0, size=(m, d))
    return SampleSet(pts, "uniform", int(seed))


def draw_chebyshev(m: int, d: int, seed: int) -> SampleSet:
    """``m`` i.i.d. points with arcsine density per coordinate, ``cos(pi u)``."""
    if m < 1 or d < 1:
        raise ValueError("need m >= 1 and d >= 1")
    # u on the open interval (0, 1): midpoints of a 2^-53 grid
    k = generator(seed).integers(0, 2**53, size=(m, d), dtype=np.int64)
    u = (k + 0.5) / 2.0**53
    return SampleSet(np.cos(np.pi * u), "chebyshev", int(seed))


def redraw(distribution: str, m: int, d: int, seed: int) -> SampleSet:
    draw = {"uniform": draw_uniform, "chebyshev": draw_chebyshev}[distribution]
    return draw(m, d, seed)


def z_values(points, m: int, gamma0: float) -> np.ndarray:
    """Per-point terms ``Z_i``; ``m`` is the set size entering the exponent."""
    if not 0 < gamma0 < 1:
        raise ValueError("gamma0 must lie in (0, 1)")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    d = pts.shape[1]
    omega = envelope_unchecked(pts)
    inv_omega2 = (math.pi / 4.0) ** d * np.prod(np.sqrt(np.clip(1.0 - pts * pts, 0.0, None)), axis=1)
    return omega * np.exp(-0.5 * math.sqrt(m / gamma0) * inv_omega2)


def test_value(Q: SampleSet, gamma0: float) -> TestStatistic:
    """Test value ``T(Q)`` and its terms; caches the value on ``Q``."""
    hit = Q._cache.get(gamma0)
    if hit is not None:
        return hit
    z = z_values(Q.points, Q.m, gamma0)
    stat = TestStatistic(float(gamma0), float(z.sum()), z)
    Q._cache[gamma0] = stat
    Q.test_value, Q.gamma0 = stat.value, float(gamma0)
    return stat


test_value.__test__ = False


def preferable_threshold_1d(m: int, gamma0: float) -> float:
    """Analytic bound on ``T(Q)`` that defines preferable 1d sets."""
    if m < 1 or not 0 < gamma0 <= 1:
        raise ValueError("need m >= 1 and 0 < gamma0 < 1")
    c1 = 32.0 * math.sqrt(2.0) / (math.pi * math.sqrt(math.pi))
    c2 = 4.0 * math.sqrt(2.0) / math.pi
    return m**0.25 * (c1 * gamma0**0.75 + c2 * gamma0**-0.25)


def is_preferable_1d(Q: SampleSet, gamma0: float) -> bool:
    if Q.dim != 1:
        raise ValueError("the analytic criterion is one-dimensional; use the percentile criterion")
    return test_value(Q, gamma0).value <= preferable_threshold_1d(Q.m, gamma0)


def reference_test_values(m: int, d: int, gamma0: float, n_ref: int, seed: int) -> np.ndarray:
    """Test values of ``n_ref`` independent uniform sets (substreams of ``seed``)."""
    out = np.empty(n_ref)
    for i in range(n_ref):
        Q = draw_uniform(m, d, derive_seed(seed, "reference", i))
        out[i] = z_values(Q.points, m, gamma0).sum()
    return out


def estimate_percentile_threshold(m: int, d: int, gamma0: float, n_ref: int = 5000,
                                  seed: int = 0) -> float:
    """Empirical ``(1 - gamma0)``-quantile of the test value of uniform sets.

    Order statistics are interpolated linearly.
    """
    if n_ref < 100:
        raise ValueError("n_ref must be at least 100")
    vals = reference_test_values(m, d, gamma0, n_ref, seed)
    return float(np.quantile(vals, 1.0 - gamma0, method="linear"))


def is_preferable(Q: SampleSet, gamma0: float, threshold: float) -> bool:
    """Percentile criterion: ``T(Q)`` at or below a precomputed threshold."""
    return test_value(Q, gamma0).value <= threshold


def group_sizes(n: int, n_groups: int) -> list[int]:
    base, extra = divmod(n, n_groups)
    return [base + (1 if k < extra else 0) for k in range(n_groups)]


def group_labels(values: Sequence[float], n_groups: int, seeds: Sequence[int] | None = None) -> np.ndarray:
    """Group number (0 = lowest values) for each position.

    Ties are broken by seed, then by position.  Earlier groups absorb the
    remainder when ``n`` is not divisible by ``n_groups``.
    """
    vals = np.asarray(values, dtype=float)
    n = vals.size
    if n == 0:
        raise ValueError("nothing to group")
    if n_groups < 2:
        raise ValueError("n_groups must be >= 2")
    sd = np.zeros(n, dtype=np.uint64) if seeds is None else np.asarray(
        [0 if s is None else int(s) for s in seeds], dtype=np.uint64)
    order = np.lexsort((np.arange(n), sd, vals))
    labels = np.empty(n, dtype=np.int64)
    start = 0
    for k, size in enumerate(group_sizes(n, n_groups)):
        labels[order[start:start + size]] = k
        start += size
    return labels


def rank_into_groups(sets: Sequence[SampleSet], gamma0: float, n_groups: int = 5) -> list[list[SampleSet]]:
    """Sort sets by test value and split them into ``n_groups`` consecutive groups."""
    if not sets:
        raise ValueError("nothing to group")
    vals = [test_value(Q, gamma0).value for Q in sets]
    labels = group_labels(vals, n_groups, [Q.seed for Q in sets])
    order = np.lexsort((np.arange(len(sets)),
                        np.asarray([0 if Q.seed is None else Q.seed for Q in sets], dtype=np.uint64),
                        np.asarray(vals)))
    groups: list[list[SampleSet]] = [[] for _ in range(n_groups)]
    for i in order:
        groups[labels[i]].append(sets[i])
    return groups


# --- CSV ---------------------------------------------------------------------

def write_sample_set_csv(Q: SampleSet, path, gamma0: float | None = None) -> None:
    """Header ``# m,d,distribution,seed,gamma0,test_value``, a values line, then one row per point."""
    if gamma0 is not None:
        test_value(Q, gamma0)
    g0 = "" if Q.gamma0 is None else repr(Q.gamma0)
    tv = "" if Q.test_value is None else repr(Q.test_value)
    seed = "" if Q.seed is None else str(Q.seed)
    with open(path, "w", newline="") as fh:
        fh.write("# m,d,distribution,seed,gamma0,test_value\n")
        fh.write(f"# {Q.m},{Q.dim},{Q.distribution},{seed},{g0},{tv}\n")
        w = csv.writer(fh)
        for row in Q.points:
            w.writerow([repr(float(v)) for v in row])


def read_sample_set_csv(path) -> SampleSet:
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError(f"{path}: missing sample-set header")
    m, d, dist, seed, g0, tv = lines[1][2:].split(",")
    pts = np.loadtxt(io.StringIO("\n".join(lines[2:])), delimiter=",", ndmin=2)
    if pts.shape != (int(m), int(d)):
        raise ValueError(f"{path}: header says {m}x{d} points, found {pts.shape}")
    Q = SampleSet(pts, dist, int(seed) if seed else None)
    if g0:
        Q.gamma0 = float(g0)
    if tv:
        Q.test_value = float(tv)
    return Q
