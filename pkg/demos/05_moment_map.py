"""A moment map for translations of the normal location model.

The fundamental field of the translation generator is purely horizontal, and
the function mu(X)(theta, v) = X v has differential omega(X#, .).  We check
this against a brute-force line integral of omega(X#, .) and show that
shifting by a constant in the annihilator of [g, g] changes nothing.
"""
import numpy as np

from statkahler import GaussHermite, build_space, gaussian_location
from statkahler.expfam import TangentCoord
from statkahler.kahler_tm import SplitTangent
from statkahler.transform_model import (
    fundamental_field,
    line_integral_comoment,
    moment_residual,
    shift_comoment,
    translation_action,
    translation_comoment,
)

fam = gaussian_location(build_space(GaussHermite(60)))
act = translation_action(1)
tc = TangentCoord([0.4], [-0.9])
probe = SplitTangent(tc, [0.3], [1.2])

print("X# for X = 1:", fundamental_field(act, [1.0], fam, tc))
mu = translation_comoment(act)
brute = line_integral_comoment(act, fam, np.zeros(1))
print("closed form mu(1) =", mu([1.0], tc.base, tc.coeffs), " line integral =", brute([1.0], tc.base, tc.coeffs))
print("moment residual:", moment_residual(act, fam, mu, [1.0], tc, probe))
shifted = shift_comoment(mu, [2.5], act.algebra)
print("after shifting by c = 2.5:", moment_residual(act, fam, shifted, [1.0], tc, probe))

# add a trivially acting direction: its comoment is constant
stab = translation_action(1, acting_dim=2)
print("X# for the stabilizer direction:", fundamental_field(stab, [0.0, 1.0], fam, tc))
