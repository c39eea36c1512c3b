"""Translations act on the normal location model and on its tangent bundle.

On a periodic grid a grid-aligned shift permutes the nodes, so the group
action on densities is exact.  The embedding commutes with the action, and
the Fisher metric and the Kaehler data on TM are preserved.
"""
import numpy as np

from statkahler import UniformGrid, build_space, gaussian_location
from statkahler.expfam import TangentCoord
from statkahler.kahler_tm import SplitTangent
from statkahler.transform_model import (
    act_density,
    equivariance_residual,
    fubini_study_preservation_residual,
    kahler_preservation_residual,
    translation_action,
)

space = build_space(UniformGrid(-20.0, 20.0, 4000, periodic=True))
fam = gaussian_location(space)
act = translation_action(1)
tc = TangentCoord([0.3], [1.1])
g = [0.75]  # 75 grid steps

moved = act_density(act, g, fam, tc.base).values
print("shifted density vs density at theta + t:", np.max(np.abs(moved - fam.density([1.05]))))
print("equivariance residual:", equivariance_residual(act, g, fam, tc))
w, w2 = SplitTangent(tc, [1.0], [0.5]), SplitTangent(tc, [-0.2], [2.0])
print("Kaehler preservation:", kahler_preservation_residual(act, g, fam, tc, w, w2))
print("Fubini-Study preservation:", fubini_study_preservation_residual(act, g, fam, w, w2))
