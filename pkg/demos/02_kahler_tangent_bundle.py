"""Metric, symplectic form and complex structure on the tangent bundle.

A tangent vector to TM at (theta, v) is split into a horizontal part l and a
vertical part u.  The Fisher matrix h then gives a metric, a symplectic form
and a complex structure J(l, u) = (-u, l) that fit together.
"""
import numpy as np

from statkahler import categorical
from statkahler.expfam import TangentCoord
from statkahler.fisher_geom import fisher_matrix
from statkahler.kahler_tm import (
    SplitTangent,
    closedness_residual,
    complex_matrix,
    cotangent_form_residual,
    dom_complex,
    dom_metric,
    dom_symplectic,
    symplectic_matrix,
)

fam = categorical(3)
tc = TangentCoord([0.4, -0.3], [1.0, 0.5])
rng = np.random.default_rng(1)
w = SplitTangent(tc, *rng.standard_normal((2, 2)))
w2 = SplitTangent(tc, *rng.standard_normal((2, 2)))

print("g(w, w2)          =", dom_metric(fam, w, w2))
print("omega(w, w2)      =", dom_symplectic(fam, w, w2))
print("g(Jw, w2)         =", dom_metric(fam, dom_complex(w), w2), "(same as omega)")
jm = complex_matrix(2)
print("J^2 + 1 vanishes: ", not np.any(jm @ jm + np.eye(4)))

det_h = np.linalg.det(fisher_matrix(fam, tc.base).entries)
print(f"det(omega) / det(h)^2 = {np.linalg.det(symplectic_matrix(fam, tc.base)) / det_h**2:.15f}")
print(f"d(omega) by finite differences: {closedness_residual(fam, tc.base):.2e}")
print(f"pullback of the canonical cotangent form vs omega: {cotangent_form_residual(fam, tc.base, tc.coeffs):.1e}")
