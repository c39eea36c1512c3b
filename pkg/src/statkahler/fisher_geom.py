"""Fisher metric, exponential/mixture connections and flatness checks."""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple

import numpy as np

from .errors import BadStep, DegenerateMetric
from .expfam import ExponentialFamily


class Kind(IntEnum):
    EXPONENTIAL = 1
    MIXTURE = -1


@dataclass(frozen=True, eq=False)
class MetricTensor:
    entries: np.ndarray
    base: np.ndarray

    def __call__(self, u, w) -> float:
        return float(np.asarray(u) @ self.entries @ np.asarray(w))

    @property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.entries)


@dataclass(frozen=True, eq=False)
class ChristoffelTensor:
    """Lowered symbols ``Gamma_{ij,k}``; the last index is the lowered one."""

    entries: np.ndarray
    kind: Kind

    def raised(self, metric: MetricTensor) -> np.ndarray:
        """``Gamma^l_{ij} = h^{lk} Gamma_{ij,k}`` with shape ``(l, i, j)``."""
        return np.einsum("lk,ijk->lij", metric.inverse, self.entries)


# five-point central difference weights for a first derivative
_STENCIL = ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12))


def _derivative(fn, theta, direction, step):
    return sum(c * fn(theta + k * step * direction) for k, c in _STENCIL) / step


def fisher_matrix(fam: ExponentialFamily, theta) -> MetricTensor:
    """``h_ij = E[d_i l d_j l]`` computed from scores."""
    theta = fam.check(theta)
    s = fam.score(theta)
    q = fam.density(theta) * fam.space.weights
    h = (s * q) @ s.T
    h = 0.5 * (h + h.T)
    evals = np.linalg.eigvalsh(h)
    if evals[0] <= 64 * np.finfo(float).eps * max(1.0, evals[-1]):
        raise DegenerateMetric(f"Fisher matrix not positive definite at theta={theta} (min eig {evals[0]:.3e})")
    return MetricTensor(h, theta)


def christoffel(fam: ExponentialFamily, theta, kind) -> ChristoffelTensor:
    kind = Kind(kind)
    theta = fam.check(theta)
    s = fam.score(theta)
    q = fam.density(theta) * fam.space.weights
    # d_i d_j l = -Hess psi, constant on the sample space
    hess_l = -fam.covariance(theta)
    gamma = np.einsum("ij,k->ijk", hess_l, s @ q)
    if kind is Kind.MIXTURE:
        gamma = gamma + np.einsum("im,jm,km,m->ijk", s, s, s, q)
    return ChristoffelTensor(gamma, kind)


def _check_step(step, direction=None):
    if not (np.isfinite(step) and step > 0):
        raise BadStep(f"finite-difference step must be positive, got {step}")
    scale = step if direction is None else step * np.max(np.abs(direction))
    if scale < 1e-8:
        raise BadStep(f"effective step {scale:.1e} would be swamped by round-off")


def duality_residual(fam: ExponentialFamily, theta, x, y, z, step: float = 1e-3) -> float:
    """``|Z h(X,Y) - h(grad1_Z X, Y) - h(X, grad-1_Z Y)|`` for constant fields X, Y."""
    theta = fam.check(theta)
    x, y, z = (np.asarray(a, dtype=float) for a in (x, y, z))
    if not np.any(z):
        return 0.0
    _check_step(step, z)
    lhs = _derivative(lambda t: fisher_matrix(fam, t)(x, y), theta, z, step)
    g1 = christoffel(fam, theta, Kind.EXPONENTIAL).entries
    gm = christoffel(fam, theta, Kind.MIXTURE).entries
    rhs = np.einsum("i,j,ijk,k->", z, x, g1, y) + np.einsum("i,j,ijk,k->", z, y, gm, x)
    return float(abs(lhs - rhs))


def curvature(fam: ExponentialFamily, theta, kind, step: float = 1e-3) -> np.ndarray:
    """``R^l_{ijk}`` assembled from finite differences of the raised symbols."""
    theta = fam.check(theta)
    _check_step(step)
    n = fam.n

    def raised(t):
        return christoffel(fam, t, kind).raised(fisher_matrix(fam, t))

    gam = raised(theta)
    # dgam[i, l, j, k] = d_i Gamma^l_{jk}
    dgam = np.stack([_derivative(raised, theta, np.eye(n)[i], step) for i in range(n)])
    r = (np.einsum("iljk->lijk", dgam) - np.einsum("jlik->lijk", dgam)
         + np.einsum("lim,mjk->lijk", gam, gam) - np.einsum("ljm,mik->lijk", gam, gam))
    return r


class FlatnessReport(NamedTuple):
    exp_flat_residual: float
    mix_curvature_residual: float


def dual_flatness_report(fam: ExponentialFamily, theta, step: float = 1e-3) -> FlatnessReport:
    exp_res = float(np.max(np.abs(christoffel(fam, theta, Kind.EXPONENTIAL).entries)))
    mix_res = float(np.max(np.abs(curvature(fam, theta, Kind.MIXTURE, step))))
    return FlatnessReport(exp_res, mix_res)
