"""Fisher metric and the two flat connections of an exponential family.

We take the normal family with unknown mean and variance, written in natural
parameters, and look at three things: the Fisher matrix, the Christoffel
symbols of the exponential and mixture connections, and how the metric
splits its derivative between them.
"""
import numpy as np

from statkahler import GaussHermite, build_space, gaussian_location_scale
from statkahler.fisher_geom import Kind, christoffel, dual_flatness_report, duality_residual, fisher_matrix

fam = gaussian_location_scale(build_space(GaussHermite(80)))
theta = np.array([0.5, -0.8])  # mean 0.3125, variance 0.625

h = fisher_matrix(fam, theta)
print("Fisher matrix (covariance of the sufficient statistics x, x^2):")
print(np.array2string(h.entries, precision=6))

# In natural coordinates the exponential connection has no symbols at all ...
print("max |Gamma(exp)| =", np.max(np.abs(christoffel(fam, theta, Kind.EXPONENTIAL).entries)))
# ... while the mixture connection carries the third cumulants (zero for x under a normal law).
print("Gamma(mix)[0,0,0] = kappa_3 of x =", christoffel(fam, theta, Kind.MIXTURE).entries[0, 0, 0])

rep = dual_flatness_report(fam, theta)
print(f"curvature of the mixture connection (finite differences): {rep.mix_curvature_residual:.2e}")

rng = np.random.default_rng(0)
x, y, z = rng.standard_normal((3, 2))
print(f"Z h(X,Y) - h(D_Z X, Y) - h(X, D*_Z Y) = {duality_residual(fam, theta, x, y, z):.2e}")
