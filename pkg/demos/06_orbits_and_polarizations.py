"""Coadjoint orbits and polarizing subalgebras for small nilpotent algebras."""
import numpy as np

from statkahler.lie_core import bch, filiform4, heisenberg
from statkahler.orbit_method import character, orbit_of, polarize

h3 = heisenberg(3)
for lam in ([0.0, 0.0, 1.0], [0.7, -0.2, 0.0]):
    orb = orbit_of(h3, lam, sample_count=8)
    pol = polarize(h3, lam)
    print(f"H3, lambda={lam}: orbit dim {orb.dimension}, polarization dim {pol.dim}")
    print("   sampled orbit points:\n", np.array2string(orb.samples[:4], precision=3))

pol = polarize(h3, [0.0, 0.0, 1.0])
print("basis of h:", pol.basis.tolist())
print("sigma(Z/2) =", character(pol, [0.0, 0.0, 0.5]))
a, b = np.array([0.3, 0.2]) @ pol.basis, np.array([-1.1, 0.4]) @ pol.basis
print("sigma(a b) - sigma(a) sigma(b) =", abs(character(pol, bch(h3, a, b)) - character(pol, a) * character(pol, b)))

f4 = filiform4()
lam = [0.2, -0.5, 0.3, 1.0]
print(f"filiform4: orbit dim {orbit_of(f4, lam).dimension}, polarization dim {polarize(f4, lam).dim}")
