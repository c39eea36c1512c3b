"""Dombrowski's almost-Hermitian structure (g, omega, J) on TM.

Everything is expressed in the chart ``(q, v)`` induced by natural parameters.
Because the exponential connection has vanishing symbols there, a tangent
vector of TM with chart velocity ``(dq, dv)`` has horizontal part ``dq`` and
vertical part ``dv``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BaseMismatch
from .expfam import ExponentialFamily, TangentCoord
from .fisher_geom import _STENCIL, fisher_matrix


@dataclass(frozen=True, eq=False)
class SplitTangent:
    """A vector of T(TM) at ``base``, by horizontal and vertical components."""

    base: TangentCoord
    horiz: np.ndarray
    vert: np.ndarray

    def __post_init__(self):
        n = self.base.base.shape[0]
        h = np.atleast_1d(np.asarray(self.horiz, dtype=float))
        v = np.atleast_1d(np.asarray(self.vert, dtype=float))
        if h.shape != (n,) or v.shape != (n,):
            raise ValueError(f"components must have length {n}")
        object.__setattr__(self, "horiz", h)
        object.__setattr__(self, "vert", v)

    @property
    def stacked(self) -> np.ndarray:
        return np.concatenate([self.horiz, self.vert])


def split_basis(tc: TangentCoord) -> list[SplitTangent]:
    """Horizontal ``e_1..e_n`` followed by vertical ``e_1..e_n``."""
    n = tc.base.shape[0]
    eye = np.eye(n)
    return [SplitTangent(tc, eye[i], np.zeros(n)) for i in range(n)] + \
           [SplitTangent(tc, np.zeros(n), eye[i]) for i in range(n)]


def _same_base(w: SplitTangent, w2: SplitTangent):
    if w.base is w2.base:
        return
    if not (np.array_equal(w.base.base, w2.base.base) and np.array_equal(w.base.coeffs, w2.base.coeffs)):
        raise BaseMismatch("tangent vectors are based at different points of TM")


def dom_metric(fam: ExponentialFamily, w: SplitTangent, w2: SplitTangent) -> float:
    _same_base(w, w2)
    h = fisher_matrix(fam, w.base.base)
    return h(w.horiz, w2.horiz) + h(w.vert, w2.vert)


def dom_symplectic(fam: ExponentialFamily, w: SplitTangent, w2: SplitTangent) -> float:
    """``h(l, u~) - h(u, l~)``, exactly antisymmetric in floating point."""
    _same_base(w, w2)
    h = fisher_matrix(fam, w.base.base).entries
    a = np.outer(w.horiz, w2.vert) - np.outer(w.vert, w2.horiz)
    # pair (i, j) with (j, i) so swapping w and w2 flips every partial sum exactly
    iu = np.triu_indices(h.shape[0], 1)
    return float(np.sum(h[iu] * (a[iu] + a.T[iu])) + np.sum(np.diag(h) * np.diag(a)))


def dom_complex(w: SplitTangent) -> SplitTangent:
    return SplitTangent(w.base, -w.vert, w.horiz)


def metric_matrix(fam: ExponentialFamily, theta) -> np.ndarray:
    """Gram matrix of g over :func:`split_basis`."""
    h = fisher_matrix(fam, theta).entries
    z = np.zeros_like(h)
    return np.block([[h, z], [z, h]])


def symplectic_matrix(fam: ExponentialFamily, theta) -> np.ndarray:
    """Gram matrix of omega over :func:`split_basis`."""
    h = fisher_matrix(fam, theta).entries
    z = np.zeros_like(h)
    return np.block([[z, h], [-h, z]])


def complex_matrix(n: int) -> np.ndarray:
    """Matrix of J acting on stacked ``(horiz, vert)`` columns."""
    eye, z = np.eye(n), np.zeros((n, n))
    return np.block([[z, -eye], [eye, z]])


def cotangent_pullback_matrix(fam: ExponentialFamily, tc: TangentCoord) -> np.ndarray:
    """Pullback of the canonical cotangent form under ``(q, v) -> (q, p = h(q) v)``.

    The canonical form is taken as ``sum_i dq^i ^ dp_i``.  The Jacobian of the
    musical map includes ``dp_i = h_ij dv^j + (d_k h_ij) v^j dq^k``; the second
    term drops out because ``d_k h_ij`` is the fully symmetric third cumulant.
    """
    theta = fam.check(tc.base)
    n = fam.n
    h = fisher_matrix(fam, theta).entries
    dh_v = np.einsum("ikj,j->ik", fam.third_cumulant(theta), tc.coeffs)
    jac = np.block([[np.eye(n), np.zeros((n, n))], [dh_v, h]])
    canon = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
    return jac.T @ canon @ jac


def index_form_matrix(fam: ExponentialFamily, theta, order: str = "dq^dv") -> np.ndarray:
    """Matrix of ``sum_ij h_ij dq^i ^ dv^j`` (or ``dv^i ^ dq^j``) over the split basis."""
    h = fisher_matrix(fam, theta).entries
    z = np.zeros_like(h)
    m = np.block([[z, h], [-h.T, z]])
    if order == "dq^dv":
        return m
    if order == "dv^dq":
        return -m
    raise ValueError(f"unknown wedge order {order!r}")


def cotangent_form_residual(fam: ExponentialFamily, theta, v) -> float:
    """Max entry gap between omega_Dom and the pulled-back canonical cotangent form."""
    tc = TangentCoord(theta, v)
    return float(np.max(np.abs(symplectic_matrix(fam, tc.base) - cotangent_pullback_matrix(fam, tc))))


def closedness_residual(fam: ExponentialFamily, theta, step: float = 1e-3) -> float:
    """Largest component of ``d omega`` in the ``(q, v)`` chart, by finite differences.

    The coefficients depend on ``q`` only, so only ``q``-derivatives are taken.
    """
    theta = fam.check(theta)
    n = fam.n
    dim = 2 * n
    dom = np.zeros((dim, dim, dim))
    for a in range(n):
        e = np.eye(n)[a]
        dom[a] = sum(c * symplectic_matrix(fam, theta + k * step * e) for k, c in _STENCIL) / step
    # (d omega)_{abc} = d_a w_bc + d_b w_ca + d_c w_ab
    d_omega = dom + np.einsum("bca->abc", dom) + np.einsum("cab->abc", dom)
    return float(np.max(np.abs(d_omega)))
