"""Orthonormal Legendre polynomials and their envelope.

Evaluates L_j on a grid, checks orthonormality with Gauss-Legendre
quadrature and shows how closely high degrees approach the envelope
Omega(y) = (2/sqrt(pi)) (1 - y^2)^(-1/4).
"""
import numpy as np

from sparse_legendre.basis import envelope, legendre_table

y, w = np.polynomial.legendre.leggauss(300)
L = legendre_table(40, y)
G = (L * (w / 2)) @ L.T
print(f"max |<L_j, L_k> - delta_jk| for j, k <= 40: {np.abs(G - np.eye(41)).max():.2e}")

grid = np.linspace(-0.999, 0.999, 2001)
env = envelope(grid[:, None])
for deg in (1, 10, 100, 1000):
    row = legendre_table(deg, grid)[deg]
    print(f"degree {deg:5d}: max |L_j| / Omega = {np.max(np.abs(row) / env):.4f}")
print("sup-norm of L_j is sqrt(2j+1) at the endpoints, so bounded-system sample counts grow with degree")
