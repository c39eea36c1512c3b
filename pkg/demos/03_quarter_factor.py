"""The map (p, v) -> sqrt(p) exp(i v / 2) and the Fubini-Study metric.

Pulling the Fubini-Study Hermitian form back along this map gives exactly one
quarter of the tangent-bundle metric (real part) and symplectic form
(imaginary part).  Every integral is a finite node sum, so the agreement is
at round-off level.
"""
import numpy as np

from statkahler import GaussHermite, build_space, gaussian_location_scale
from statkahler.expfam import TangentCoord
from statkahler.kahler_tm import metric_matrix, symplectic_matrix
from statkahler.l2_embed import embed, pullback_gram

fam = gaussian_location_scale(build_space(GaussHermite(80)))
tc = TangentCoord([0.2, -0.9], [0.7, -1.3])

print("||Phi(p, v)||^2 =", embed(fam, tc).norm() ** 2)
gram = pullback_gram(fam, tc)
print("4 Re G_FS - g:    ", np.max(np.abs(4 * gram.real - metric_matrix(fam, tc.base))))
print("4 Im G_FS - omega:", np.max(np.abs(4 * gram.imag - symplectic_matrix(fam, tc.base))))
print("Im block (horizontal rows, vertical columns) = Fisher / 4:")
print(np.array2string(gram.imag[:2, 2:], precision=6))
