"""Induced representations sitting inside left translations on the sample space.

For the circle group acting on itself the lifted vectors are characters;
left translation maps each line to itself and distinct characters are
orthogonal.  For the Heisenberg group acting on G/Z the same holds for
characters that vanish on the center.
"""
import numpy as np

from statkahler.lie_core import abelian, heisenberg
from statkahler.errors import StabilizerObstruction
from statkahler.orbit_method import realization_overlap, realization_residual, realize

alg = abelian(1)
none = np.zeros((0, 1))
r3, r5 = realize(alg, none, [3.0], 1.0, 1024), realize(alg, none, [5.0], 1.0, 1024)
shifts = np.array([[17 / 1024], [-300 / 1024]])
print("abelian residual:", realization_residual(r3, shifts))
print("overlap of lambda = 3 and 5:", realization_overlap(r3, r5))

h3 = heisenberg(3)
z = [[0.0, 0.0, 1.0]]
real = realize(h3, z, [1.0, -1.0, 0.0], 4.0, 16)
print("Heisenberg/Z residual:", realization_residual(real, np.array([[0.25, 0.5, 0.3], [1.0, -0.75, -2.0]])))
try:
    realize(h3, z, [0.0, 0.0, 1.0], 4.0, 16)
except StabilizerObstruction as exc:
    print("lambda(Z) != 0 is rejected:", exc)
