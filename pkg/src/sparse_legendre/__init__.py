"""Sparse Legendre expansions from random samples by l1 minimization."""
from .basis import (
    IndexSet,
    envelope,
    eval_expansion,
    eval_legendre_1d,
    eval_legendre_multi,
    legendre_matrix,
    legendre_table,
    make_total_degree_set,
    make_window_set,
)
from .measurement import (
    Observation,
    SensingMatrix,
    SparseSignal,
    assemble,
    assemble_preconditioned,
    gen_sparse_signal,
    observe,
)
from .sampling import (
    SampleSet,
    TestStatistic,
    draw_chebyshev,
    draw_uniform,
    estimate_percentile_threshold,
    is_preferable_1d,
    preferable_threshold_1d,
    rank_into_groups,
    test_value,
)
from .solver import (
    RecoveryResult,
    SolverConfig,
    best_s_term_error,
    l0_oracle,
    recovery_metrics,
    solve_bp,
    solve_bpdn,
)

__version__ = "0.1.0"
