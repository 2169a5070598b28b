"""Batch reproductions of the recovery experiments.

Every trial is an independent task described by plain values (seeds,
sizes, labels), so tasks can run in worker processes.  Results are sorted
by ``(case, group, s, m, trial)`` before aggregation; outputs therefore do
not depend on the number of workers.

Seeds: the record seed of a trial is ``derive_seed(master, experiment,
case, s, m, trial)``; the signal is drawn from a substream of it.  Sample
sets that are shared across sparsities (quintiles, m- and s-sweeps) use
``derive_seed(master, experiment, "set", case, m, index)``.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..basis import make_window_set
from ..measurement import assemble, assemble_preconditioned, gen_sparse_signal, observe
from ..rng import derive_seed
from ..sampling import group_labels, redraw, z_values
from ..solver import SolverConfig, recovery_metrics, solve_bp
from .records import TrialRecord, summarize

log = logging.getLogger(__name__)

UNIFORM = "uniform"
CHEBYSHEV = "chebyshev"


@dataclass(frozen=True)
class Task:
    experiment: str
    case: str
    group: str
    s: int
    m: int
    trial: int
    seed: int
    set_seed: int
    distribution: str
    window: tuple
    success_tol: float
    solver: SolverConfig
    timing: bool = True


def run_task(task: Task) -> TrialRecord:
    """Draw (or redraw) the sample set and signal of one trial and solve BP."""
    J = make_window_set(*task.window)
    Q = redraw(task.distribution, task.m, 1, task.set_seed)
    A = assemble_preconditioned(J, Q) if task.distribution == CHEBYSHEV else assemble(J, Q)
    c = gen_sparse_signal(J.size, task.s, derive_seed(task.seed, "signal"))
    g = observe(A, c).values
    t0 = time.perf_counter()
    res = solve_bp(A.matrix, g, task.solver)
    ms = (time.perf_counter() - t0) * 1e3 if task.timing else 0.0
    l2, l1, ok = recovery_metrics(c, res, task.success_tol)
    if not res.converged:
        log.debug("%s %s s=%d m=%d trial=%d: %s", task.experiment, task.case, task.s, task.m, task.trial, res.message)
    return TrialRecord(task.experiment, task.case, task.group, task.s, task.m, task.trial, task.seed,
                       l2, l1, ok, res.iterations, round(ms, 3))


def execute(tasks, threads: int = 1, progress=None) -> list[TrialRecord]:
    """Run tasks inline or on a process pool; returns records in sorted order."""
    tasks = list(tasks)
    if threads <= 1:
        out = []
        for i, t in enumerate(tasks):
            out.append(run_task(t))
            if progress:
                progress(i + 1, len(tasks))
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            out = list(pool.map(run_task, tasks, chunksize=max(1, len(tasks) // (8 * threads))))
    return sorted(out, key=TrialRecord.sort_key)


def _trial_seed(spec, case, s, m, t):
    return derive_seed(spec.master_seed, spec.kind, case, s, m, t)


def _set_seed(spec, case, m, k):
    return derive_seed(spec.master_seed, spec.kind, "set", case, m, k)


def window_label(window) -> str:
    return f"window[{window[0]},{window[1]}]"


def fig1_tasks(spec, timing=True):
    """A fresh uniform sample set and signal per trial, for every window and s."""
    m = spec.m_grid[0]
    for w in spec.windows:
        case = window_label(w)
        for s in spec.sparsities:
            for t in range(spec.trials):
                seed = _trial_seed(spec, case, s, m, t)
                yield Task(spec.kind, case, "all", s, m, t, seed, derive_seed(seed, "samples"),
                           UNIFORM, tuple(w), spec.success_tol, spec.solver, timing)


def uniform_groups(spec, m) -> np.ndarray:
    """Group index (0 = lowest test values) of each uniform set of size ``m``."""
    seeds = [_set_seed(spec, UNIFORM, m, k) for k in range(spec.trials)]
    vals = [float(z_values(redraw(UNIFORM, m, 1, sd).points, m, spec.gamma0).sum()) for sd in seeds]
    return group_labels(vals, spec.n_groups, seeds)


def grouped_tasks(spec, chebyshev=True, timing=True):
    """Uniform sets labelled by test-value group, plus Chebyshev sets.

    Sets are the experimental unit: each set of size ``m`` is reused across
    sparsities with a fresh signal per (set, sparsity).
    """
    w = tuple(spec.windows[0])
    for m in spec.m_grid:
        labels = uniform_groups(spec, m)
        for s in spec.sparsities:
            for k in range(spec.trials):
                yield Task(spec.kind, UNIFORM, f"g{labels[k] + 1}", s, m, k, _trial_seed(spec, UNIFORM, s, m, k),
                           _set_seed(spec, UNIFORM, m, k), UNIFORM, w, spec.success_tol, spec.solver, timing)
                if chebyshev:
                    yield Task(spec.kind, CHEBYSHEV, "all", s, m, k, _trial_seed(spec, CHEBYSHEV, s, m, k),
                               _set_seed(spec, CHEBYSHEV, m, k), CHEBYSHEV, w, spec.success_tol, spec.solver,
                               timing)


def run_fig1(spec, threads=1, timing=True, progress=None):
    """Mean error and success rate per (window, s)."""
    recs = execute(fig1_tasks(spec, timing), threads, progress)
    return summarize(spec.kind, recs), recs


def run_quintiles(spec, threads=1, timing=True, progress=None):
    """Mean error and success rate per (test-value group, s) for 180 x 360 systems."""
    recs = execute(grouped_tasks(spec, chebyshev=False, timing=timing), threads, progress)
    return summarize(spec.kind, recs, pooled_cases=(UNIFORM,)), recs


def run_msweep(spec, threads=1, timing=True, progress=None):
    """Lowest/highest group, all uniform sets and Chebyshev sets versus m."""
    recs = execute(grouped_tasks(spec, chebyshev=True, timing=timing), threads, progress)
    return summarize(spec.kind, recs, pooled_cases=(UNIFORM,)), recs


def run_ssweep(spec, threads=1, timing=True, progress=None):
    """Same four series as the m-sweep, versus s at m = 180."""
    recs = execute(grouped_tasks(spec, chebyshev=True, timing=timing), threads, progress)
    return summarize(spec.kind, recs, pooled_cases=(UNIFORM,)), recs


RUNNERS = {"fig1": run_fig1, "quintiles": run_quintiles, "msweep": run_msweep, "ssweep": run_ssweep}
