"""Basis pursuit recovery of a sparse Legendre expansion.

A 20-sparse coefficient vector on degrees 1..360 is recovered from 180
uniform samples, then from 180 Chebyshev samples with the preconditioned
matrix.
"""
from sparse_legendre.basis import make_window_set
from sparse_legendre.measurement import assemble, assemble_preconditioned, gen_sparse_signal, observe
from sparse_legendre.sampling import draw_chebyshev, draw_uniform
from sparse_legendre.solver import recovery_metrics, solve_bp

J = make_window_set(1, 360)
c = gen_sparse_signal(J.size, 20, seed=11)
for name, Q, build in (("uniform", draw_uniform(180, 1, 3), assemble),
                       ("chebyshev", draw_chebyshev(180, 1, 3), assemble_preconditioned)):
    A = build(J, Q)
    res = solve_bp(A.matrix, observe(A, c).values)
    l2, l1, ok = recovery_metrics(c, res)
    print(f"{name:9s}: rel l2 {l2:.2e}, rel l1 {l1:.2e}, success {ok}, "
          f"{res.iterations} iterations ({res.message})")
