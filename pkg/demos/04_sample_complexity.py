"""Sample-count formulas with the universal constant set to 1.

Absolute values are not meaningful (the constant is unknown); the
interesting part is how the counts scale with sparsity and N, and that
the bounded-system count for a high-degree window exceeds N itself.
"""
import math

from sparse_legendre import theory

for s in (5, 10, 20):
    row = []
    for N in (200, 2000, 20000):
        p = theory.REParams(s=s, alpha=2.0, delta=0.5, N=N)
        row.append(f"N={N}: {theory.complexity_1d(p):.3e}")
    print(f"s={s:2d}  " + "  ".join(row))

p = theory.REParams(s=5, alpha=2.0, delta=0.5, N=200)
print(f"bounded system, window 1801..2000 (Theta^2 = 4001): {theory.complexity_bos(p, math.sqrt(4001)):.3e}")
fp = theory.complexity_multi(theory.REParams(s=5, alpha=2.0, delta=0.5, N=200, d=3), full_output=True)
print(f"d=3: m = {fp.m:.3e} after {fp.iterations} fixed-point iterations (residual {fp.residual:.1e})")
