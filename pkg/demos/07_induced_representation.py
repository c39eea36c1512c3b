"""The Schroedinger-type representation of the Heisenberg group on a grid.

Inducing the character exp(2 pi i lambda(X)) from the polarization span{Y, Z}
gives operators acting on functions of one variable: shifts along X times
phases.  With a periodic grid and grid-aligned group elements these are
exact unitary matrices and compose like the group.
"""
import numpy as np

from statkahler.lie_core import bch, heisenberg
from statkahler.orbit_method import complement_basis, induced_rep_operator, polarize, quotient, unitarity_defect

alg = heisenberg(3)
pol = polarize(alg, [0.0, 0.0, 1.0])
grid = quotient(alg, pol.basis, 16.0, 256, complement=complement_basis(alg, pol.basis))
g = 3 * (16.0 / 256) * grid.complement[0] + 2.0 * pol.basis[0]
h = -5 * (16.0 / 256) * grid.complement[0] + 0.25 * np.array([0.0, 0.0, 1.0])

a, b = induced_rep_operator(alg, pol, g, grid), induced_rep_operator(alg, pol, h, grid)
print("unitarity defect:", unitarity_defect(a))
print("pi(g) pi(h) - pi(gh):", np.max(np.abs(a @ b - induced_rep_operator(alg, pol, bch(alg, g, h), grid))))
print("nonzeros per row:", np.count_nonzero(a, axis=1).max())
