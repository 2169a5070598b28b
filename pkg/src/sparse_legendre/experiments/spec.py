"""Experiment descriptions, defaults and the key-value config file.

Config files are INI-style (``configparser``).  Keys in ``[DEFAULT]`` apply
to every experiment; a section named after an experiment (``[fig1]``,
``[quintiles]``, ``[msweep]``, ``[ssweep]``) overrides them.  Recognized keys:

=================  ==========================================================
trials             trials per configuration (fig1) or sample sets (others)
sparsities         comma-separated sparsity grid
m_grid             comma-separated sample counts
m                  sample count where it is fixed
N                  size of the index set
windows            fig1 degree windows, e.g. ``1-200, 301-500, 1801-2000``
gamma0             level of the test value
n_groups           number of test-value groups
success_tol        relative l2 error counted as success
max_iters          solver iteration budget
feas_tol           solver feasibility tolerance
gap_tol            solver stagnation tolerance
=================  ==========================================================
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..solver import SolverConfig

KINDS = ("fig1", "quintiles", "msweep", "ssweep", "check-lemmas", "complexity")
MIN_TRIALS = 10


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str
    master_seed: int = 0
    trials: int = 100
    sparsities: tuple = (14,)
    m_grid: tuple = (100,)
    N: int = 200
    windows: tuple = ((1, 360),)
    gamma0: float = 0.8
    n_groups: int = 5
    solver: SolverConfig = field(default_factory=SolverConfig)
    success_tol: float = 1e-4
    out_dir: str = "results"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if not self.sparsities or not self.m_grid or not self.windows:
            raise ValueError("grids must be nonempty")
        if self.trials < 1 or self.n_groups < 1 or self.N < 1:
            raise ValueError("counts must be >= 1")
        if any(s < 1 or s > self.N for s in self.sparsities):
            raise ValueError("sparsities must lie in [1, N]")
        if any(m < 1 for m in self.m_grid):
            raise ValueError("sample counts must be >= 1")
        for a, b in self.windows:
            if b - a + 1 != self.N:
                raise ValueError(f"window [{a},{b}] does not have N = {self.N} indices")

    def scaled(self, scale: float) -> "ExperimentSpec":
        """Copy with trial counts multiplied by ``scale`` (at least 10)."""
        if not 0 < scale <= 1:
            raise ValueError("scale must lie in (0, 1]")
        trials = max(MIN_TRIALS, int(round(self.trials * scale)))
        return replace(self, trials=min(trials, self.trials))


def fig1_spec(**kw) -> ExperimentSpec:
    """m = 100 samples, three degree windows of size 200, 100 trials per s."""
    base = dict(kind="fig1", trials=100, sparsities=tuple(range(5, 41, 5)), m_grid=(100,), N=200,
                windows=((1, 200), (301, 500), (1801, 2000)))
    base.update(kw)
    return ExperimentSpec(**base)


def quintiles_spec(**kw) -> ExperimentSpec:
    """1000 uniform sets of 180 samples, J = {1..360}, five test-value groups."""
    base = dict(kind="quintiles", trials=1000, sparsities=(30, 40), m_grid=(180,), N=360,
                windows=((1, 360),), gamma0=0.8, n_groups=5)
    base.update(kw)
    return ExperimentSpec(**base)


def msweep_spec(**kw) -> ExperimentSpec:
    """1500 uniform and 1500 Chebyshev sets per m in {10, ..., 180}, s = 14."""
    base = dict(kind="msweep", trials=1500, sparsities=(14,), m_grid=tuple(range(10, 181, 10)), N=360,
                windows=((1, 360),), gamma0=0.8, n_groups=5)
    base.update(kw)
    return ExperimentSpec(**base)


def ssweep_spec(**kw) -> ExperimentSpec:
    """1500 uniform and 1500 Chebyshev sets of 180 samples, s in {5, ..., 60}."""
    base = dict(kind="ssweep", trials=1500, sparsities=tuple(range(5, 61, 5)), m_grid=(180,), N=360,
                windows=((1, 360),), gamma0=0.8, n_groups=5)
    base.update(kw)
    return ExperimentSpec(**base)


DEFAULT_SPECS = {"fig1": fig1_spec, "quintiles": quintiles_spec, "msweep": msweep_spec, "ssweep": ssweep_spec}


def _ints(text: str) -> tuple:
    return tuple(int(v) for v in text.replace(" ", "").split(",") if v)


def _windows(text: str) -> tuple:
    out = []
    for part in text.split(","):
        a, b = part.strip().split("-")
        out.append((int(a), int(b)))
    return tuple(out)


_SPEC_KEYS = {
    "trials": int, "sparsities": _ints, "m_grid": _ints, "N": int, "windows": _windows,
    "gamma0": float, "n_groups": int, "success_tol": float,
}
_SOLVER_KEYS = {"max_iters": int, "feas_tol": float, "gap_tol": float, "cert_tol": float,
                "window": int, "method": str}


def load_config(path) -> configparser.ConfigParser:
    cp = configparser.ConfigParser()
    cp.optionxform = str  # keep "N" upper case
    text = Path(path).read_text()
    if not text.lstrip().startswith("["):
        text = "[DEFAULT]\n" + text
    cp.read_string(text, source=str(path))
    known = set(_SPEC_KEYS) | set(_SOLVER_KEYS) | {"m"}
    for sec in [cp.default_section, *cp.sections()]:
        for key in cp[sec]:
            if key not in known:
                raise ValueError(f"{path}: unknown config key {key!r} in [{sec}]")
    return cp


def apply_config(spec: ExperimentSpec, cp: configparser.ConfigParser | None) -> ExperimentSpec:
    """Override fields of ``spec`` from the ``[DEFAULT]`` and ``[<kind>]`` sections."""
    if cp is None:
        return spec
    sec = cp[spec.kind] if cp.has_section(spec.kind) else cp[cp.default_section]
    upd = {}
    for key, conv in _SPEC_KEYS.items():
        if key in sec:
            upd[key] = conv(sec[key])
    if "m" in sec:
        upd["m_grid"] = (int(sec["m"]),)
    solver = {k: conv(sec[k]) for k, conv in _SOLVER_KEYS.items() if k in sec}
    if solver:
        upd["solver"] = replace(spec.solver, **solver)
    if "N" in upd and "windows" not in upd and spec.kind != "fig1":
        upd["windows"] = ((1, upd["N"]),)
    return replace(spec, **upd)
