"""The map ``(p, v) -> sqrt(p) exp(i v / 2)`` into the unit sphere of L^2 and
the Fubini-Study form on the projectivization.

Convention: ``<f, g> = sum w conj(f) g`` and the Fubini-Study Hermitian form
is ``g_FS + i omega_FS``.  With this choice the pullback equals a quarter of
``g + i omega`` from :mod:`statkahler.kahler_tm` without any sign flips.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BaseMismatch, SpaceMismatch
from .expfam import ExponentialFamily, TangentCoord
from .kahler_tm import (
    SplitTangent,
    dom_metric,
    dom_symplectic,
    metric_matrix,
    split_basis,
    symplectic_matrix,
)
from .sample_space import L2Function, _same_space, l2_inner


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """A class ``[z]`` represented by a unit-norm vector."""

    rep: L2Function

    def __post_init__(self):
        nrm = self.rep.norm()
        if abs(nrm - 1.0) > 1e-12:
            raise SpaceMismatch(f"representative must have unit norm, got {nrm!r}")

    @classmethod
    def from_vector(cls, z: L2Function) -> "ProjectivePoint":
        return cls(z * (1.0 / z.norm()))


def embed(fam: ExponentialFamily, tc: TangentCoord) -> L2Function:
    p = fam.density(tc.base)
    v = fam.tangent_function(tc).values.real
    return L2Function(np.sqrt(p) * np.exp(0.5j * v), fam.space)


def embed_differential(fam: ExponentialFamily, tc: TangentCoord, w: SplitTangent) -> L2Function:
    """``d Phi (w) = Phi * (w1 + i w2)``.

    Horizontal curves keep the natural-chart coefficients of ``v`` fixed, so
    their phase derivative is the constant ``-1/2 l^k v^m d_k d_m psi``.
    """
    if not (np.array_equal(w.base.base, tc.base) and np.array_equal(w.base.coeffs, tc.coeffs)):
        raise BaseMismatch("split vector is not based at the given point")
    s = fam.score(tc.base)
    hess = fam.covariance(tc.base)
    w1 = 0.5 * (w.horiz @ s)
    w2 = 0.5 * (w.vert @ s) - 0.5 * (w.horiz @ hess @ tc.coeffs)
    phi = embed(fam, tc)
    return L2Function(phi.values * (w1 + 1j * w2), fam.space)


def fubini_study(z0: ProjectivePoint, dz1: L2Function, dz2: L2Function) -> complex:
    """``<dz1, dz2> - <dz1, z0><z0, dz2>``; real part g_FS, imaginary part omega_FS."""
    space = z0.rep.space
    _same_space(space, dz1.space)
    _same_space(space, dz2.space)
    return l2_inner(space, dz1, dz2) - l2_inner(space, dz1, z0.rep) * l2_inner(space, z0.rep, dz2)


def projective_chart(z0: ProjectivePoint, z: L2Function) -> L2Function:
    """``[z] -> z / <z0, z> - z0``, the affine chart onto ``z0``'s orthogonal complement."""
    return z * (1.0 / l2_inner(z0.rep.space, z0.rep, z)) - z0.rep


def fubini_study_chart(z0: ProjectivePoint, dz1: L2Function, dz2: L2Function, step: float = 1e-4) -> complex:
    """Chart-side evaluation: differentiate the affine chart along ``z0 + t dz``."""

    def chart_velocity(dz):
        plus = projective_chart(z0, z0.rep + dz * step)
        minus = projective_chart(z0, z0.rep - dz * step)
        return (plus - minus) * (0.5 / step)

    return l2_inner(z0.rep.space, chart_velocity(dz1), chart_velocity(dz2))


def pullback_gram(fam: ExponentialFamily, tc: TangentCoord) -> np.ndarray:
    """Complex 2n x 2n matrix of ``FS(dPhi e_a, dPhi e_b)`` over the split basis."""
    z0 = ProjectivePoint.from_vector(embed(fam, tc))
    images = [embed_differential(fam, tc, e) for e in split_basis(tc)]
    dim = len(images)
    gram = np.empty((dim, dim), dtype=complex)
    for a in range(dim):
        for b in range(dim):
            gram[a, b] = fubini_study(z0, images[a], images[b])
    return gram


def pullback_relative_residuals(fam: ExponentialFamily, tc: TangentCoord) -> tuple[float, float]:
    """Relative Frobenius gaps between pulled-back and quartered Dombrowski Gram matrices."""
    gram = pullback_gram(fam, tc)
    g = 0.25 * metric_matrix(fam, tc.base)
    om = 0.25 * symplectic_matrix(fam, tc.base)
    g_res = np.linalg.norm(gram.real - g) / np.linalg.norm(g)
    om_res = np.linalg.norm(gram.imag - om) / np.linalg.norm(om)
    return float(g_res), float(om_res)


class PullbackResiduals(NamedTuple):
    g_res: float
    omega_res: float


def pullback_residuals(fam: ExponentialFamily, tc: TangentCoord,
                       w: SplitTangent, w2: SplitTangent) -> PullbackResiduals:
    z0 = ProjectivePoint.from_vector(embed(fam, tc))
    fs = fubini_study(z0, embed_differential(fam, tc, w), embed_differential(fam, tc, w2))
    return PullbackResiduals(
        abs(fs.real - 0.25 * dom_metric(fam, w, w2)),
        abs(fs.imag - 0.25 * dom_symplectic(fam, w, w2)),
    )
