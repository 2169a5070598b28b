"""Scoring random sample sets with the test value.

Draws uniform sets, computes their test values, ranks them into five
groups and compares the analytic 1d preferability threshold with the
empirical percentile threshold.
"""
import numpy as np

from sparse_legendre.rng import derive_seed
from sparse_legendre.sampling import (draw_uniform, estimate_percentile_threshold, group_labels, is_preferable_1d,
                                      preferable_threshold_1d, test_value)

m, gamma0, n = 100, 0.8, 500
sets = [draw_uniform(m, 1, derive_seed(1, "demo", k)) for k in range(n)]
vals = np.array([test_value(Q, gamma0).value for Q in sets])
labels = group_labels(vals, 5, [Q.seed for Q in sets])
for g in range(5):
    v = vals[labels == g]
    print(f"group {g + 1}: {v.size} sets, test values {v.min():.3f} .. {v.max():.3f}")

thr = preferable_threshold_1d(m, gamma0)
pct = estimate_percentile_threshold(m, 1, gamma0, 5000, seed=2)
print(f"analytic threshold {thr:.4f}: {np.mean([is_preferable_1d(Q, gamma0) for Q in sets]):.3f} of sets pass")
print(f"empirical {100 * (1 - gamma0):.0f}th percentile {pct:.4f}: {np.mean(vals <= pct):.3f} of sets pass")
