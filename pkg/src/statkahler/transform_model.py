"""Group actions on the sample space and the induced actions on M and TM.

A :class:`GroupAction` carries the node-level action ``x -> g x`` and, for the
built-in transformation models, the parameter-level action ``theta -> theta'``
with its tangent pushforward.  Group elements are exponential coordinates.

Comoments are callables ``comoment(X, theta, v) -> float``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.special import roots_legendre

from .errors import ActionLeavesGrid, BadStep, NotInAnnihilator
from .expfam import ExponentialFamily, TangentCoord, categorical, gaussian_location
from .fisher_geom import _STENCIL, fisher_matrix
from .kahler_tm import SplitTangent, dom_metric, dom_symplectic
from .l2_embed import ProjectivePoint, embed, embed_differential, fubini_study
from .lie_core import LieAlgebra, abelian, bch, bracket, heisenberg
from .sample_space import FiniteCounting, L2Function, SampleSpace, _axes

Comoment = Callable[[np.ndarray, np.ndarray, np.ndarray], float]


@dataclass(frozen=True, eq=False)
class GroupAction:
    name: str
    algebra: LieAlgebra
    act_sample: Callable[[np.ndarray, np.ndarray], np.ndarray]
    stabilizer_basis: np.ndarray
    act_param: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    push_vector: Optional[Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]] = None
    discrete: bool = False

    def require_parameter_action(self):
        if self.act_param is None or self.push_vector is None:
            raise NotImplementedError(f"{self.name} has no parameter-level action")

    def element(self, g) -> np.ndarray:
        g = np.atleast_1d(np.asarray(g, dtype=float))
        if g.shape != (self.algebra.dim,):
            raise ValueError(f"group element needs {self.algebra.dim} exponential coordinates")
        if self.discrete and np.any(g != np.round(g)):
            raise ActionLeavesGrid(f"{self.name} only acts by integer elements")
        return g


# -- built-in models ---------------------------------------------------------------

def translation_action(dim: int, acting_dim: int | None = None) -> GroupAction:
    """``R^acting_dim`` translating the first ``dim`` coordinates of ``R^dim``.

    Extra group directions beyond ``dim`` act trivially and span the stabilizer.
    """
    k = dim if acting_dim is None else acting_dim
    if k < dim:
        raise ValueError("acting group must cover every sample coordinate")
    proj = np.eye(k)[:dim]

    def act_sample(g, x):
        return np.asarray(x, dtype=float) + proj @ g

    def act_param(g, theta):
        return np.asarray(theta, dtype=float) + proj @ g

    def push_vector(g, theta, u):
        return np.asarray(u, dtype=float).copy()

    stab = np.eye(k)[dim:]
    name = f"translation(R^{k} on R^{dim})"
    return GroupAction(name, abelian(k), act_sample, stab, act_param, push_vector)


def cyclic_action(n: int) -> GroupAction:
    """Cyclic relabeling ``x_j -> x_{j+g mod n}`` of the atoms of ``categorical(n)``."""

    def shift(g):
        return int(np.round(np.asarray(g).ravel()[0]))

    def act_sample(g, x):
        return np.mod(np.asarray(x, dtype=float) + shift(g), n)

    def act_param(g, theta):
        logits = np.append(np.asarray(theta, dtype=float), 0.0)
        moved = np.roll(logits, shift(g))
        return moved[:-1] - moved[-1]

    def push_vector(g, theta, u):
        full = np.append(np.asarray(u, dtype=float), 0.0)
        moved = np.roll(full, shift(g))
        return moved[:-1] - moved[-1]

    return GroupAction(f"cyclic({n})", abelian(1), act_sample, np.zeros((0, 1)), act_param, push_vector,
                       discrete=True)


def heisenberg_center_action() -> GroupAction:
    """``H_3`` acting on ``H_3 / Z = R^2`` (coordinates along X, Y) by left multiplication."""
    alg = heisenberg(3)

    def act_sample(g, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        pts = np.hstack([x, np.zeros((x.shape[0], 1))])
        return np.array([bch(alg, g, p)[:2] for p in pts])

    return GroupAction("heisenberg/center", alg, act_sample, np.array([[0.0, 0.0, 1.0]]))


@dataclass(frozen=True, eq=False)
class TransformationModel:
    family: Optional[ExponentialFamily]
    action: GroupAction


def gaussian_translation_model(space: SampleSpace, acting_dim: int | None = None,
                               bound: float = 5.0) -> TransformationModel:
    return TransformationModel(gaussian_location(space, bound), translation_action(space.dim, acting_dim))


def categorical_cyclic_model(n: int) -> TransformationModel:
    return TransformationModel(categorical(n), cyclic_action(n))


# -- node-level action -------------------------------------------------------------

class NodeMap(NamedTuple):
    index: np.ndarray
    wrapped: np.ndarray


def node_map(action: GroupAction, g, space: SampleSpace) -> NodeMap:
    """Indices ``j_i`` with ``g^-1 x_i = x_{j_i}``; ``wrapped`` marks preimages that crossed a seam."""
    g = action.element(g)
    pre = np.asarray(action.act_sample(-g, space.nodes), dtype=float).reshape(space.size, -1)
    if space.is_periodic:
        idx = space.locate(pre)
        wrapped = np.zeros(space.size, dtype=bool)
        for j, ax in enumerate(_axes(space.descriptor)):
            wrapped |= (pre[:, j] < ax.lo - 1e-12) | (pre[:, j] >= ax.hi - 1e-12)
        return NodeMap(idx, wrapped)
    if isinstance(space.descriptor, FiniteCounting):
        k = np.rint(pre[:, 0])
        if np.any(np.abs(pre[:, 0] - k) > 1e-9) or np.any((k < 0) | (k >= space.size)):
            raise ActionLeavesGrid("action does not permute the atoms")
        return NodeMap(k.astype(np.int64), np.zeros(space.size, dtype=bool))
    raise ActionLeavesGrid("node-level action needs a periodic grid or a finite space")


def translate(action: GroupAction, g, f: L2Function) -> L2Function:
    """Left translation ``(g f)(x) = f(g^-1 x)``."""
    nm = node_map(action, g, f.space)
    return L2Function(f.values[nm.index], f.space)


def act_density(action: GroupAction, g, fam: ExponentialFamily, theta) -> L2Function:
    """Node function ``x -> p(g^-1 x; theta)``."""
    nm = node_map(action, g, fam.space)
    return L2Function(fam.density(theta)[nm.index], fam.space)


def act_tangent(action: GroupAction, g, fam: ExponentialFamily, tc: TangentCoord) -> TangentCoord:
    """Parameter-level image ``(g p, g_* v)`` of a point of TM."""
    action.require_parameter_action()
    g = action.element(g)
    theta2 = fam.check(action.act_param(g, tc.base))
    return TangentCoord(theta2, action.push_vector(g, tc.base, tc.coeffs))


def push_split(action: GroupAction, g, fam: ExponentialFamily, w: SplitTangent) -> SplitTangent:
    """``g_*`` on T(TM): horizontal and vertical parts are each pushed by ``g_*``."""
    base2 = act_tangent(action, g, fam, w.base)
    g = action.element(g)
    return SplitTangent(base2, action.push_vector(g, w.base.base, w.horiz),
                        action.push_vector(g, w.base.base, w.vert))


def tangent_function_residual(action: GroupAction, g, fam: ExponentialFamily, tc: TangentCoord) -> float:
    """``max |(g_* v)(x) - v(g^-1 x)|`` over nodes whose preimage does not cross a seam."""
    nm = node_map(action, g, fam.space)
    lhs = fam.tangent_function(act_tangent(action, g, fam, tc)).values
    rhs = fam.tangent_function(tc).values[nm.index]
    keep = ~nm.wrapped
    return float(np.max(np.abs(lhs[keep] - rhs[keep]), initial=0.0))


def equivariance_residual(action: GroupAction, g, fam: ExponentialFamily, tc: TangentCoord) -> float:
    """``sup_x |Phi(g(p, v))(x) - Phi(p, v)(g^-1 x)|``."""
    lhs = embed(fam, act_tangent(action, g, fam, tc))
    rhs = translate(action, g, embed(fam, tc))
    return float(np.max(np.abs(lhs.values - rhs.values)))


def isometry_residual(action: GroupAction, g, fam: ExponentialFamily, theta, u, u2) -> float:
    """``|h_{g theta}(g_* u, g_* u2) - h_theta(u, u2)|``."""
    action.require_parameter_action()
    g = action.element(g)
    theta = fam.check(theta)
    theta2 = action.act_param(g, theta)
    before = fisher_matrix(fam, theta)(u, u2)
    after = fisher_matrix(fam, theta2)(action.push_vector(g, theta, u), action.push_vector(g, theta, u2))
    return float(abs(after - before))


class KahlerResiduals(NamedTuple):
    g_res: float
    omega_res: float


def kahler_preservation_residual(action: GroupAction, g, fam: ExponentialFamily, tc: TangentCoord,
                                 w: SplitTangent, w2: SplitTangent) -> KahlerResiduals:
    pw, pw2 = push_split(action, g, fam, w), push_split(action, g, fam, w2)
    pw2 = SplitTangent(pw.base, pw2.horiz, pw2.vert)
    return KahlerResiduals(
        abs(dom_metric(fam, pw, pw2) - dom_metric(fam, w, w2)),
        abs(dom_symplectic(fam, pw, pw2) - dom_symplectic(fam, w, w2)),
    )


def fubini_study_preservation_residual(action: GroupAction, g, fam: ExponentialFamily,
                                       w: SplitTangent, w2: SplitTangent) -> float:
    """``|G_FS(g_* w, g_* w2) - G_FS(w, w2)|`` on images of T(TM) in projective space."""

    def hermitian(a, b):
        z0 = ProjectivePoint.from_vector(embed(fam, a.base))
        return fubini_study(z0, embed_differential(fam, a.base, a), embed_differential(fam, a.base, b))

    pw, pw2 = push_split(action, g, fam, w), push_split(action, g, fam, w2)
    pw2 = SplitTangent(pw.base, pw2.horiz, pw2.vert)
    return float(abs(hermitian(pw, pw2) - hermitian(w, w2)))


# -- infinitesimal action and moment maps ----------------------------------------

def _check_step(step):
    if not (np.isfinite(step) and step >= 1e-8):
        raise BadStep(f"finite-difference step {step} unusable")


def fundamental_field(action: GroupAction, x, fam: ExponentialFamily, tc: TangentCoord,
                      step: float = 1e-3) -> SplitTangent:
    """``X#`` at ``tc``: derivative of ``t -> exp(t X) (p, v)`` in the natural chart."""
    if action.discrete:
        raise ActionLeavesGrid(f"{action.name} has no one-parameter subgroups")
    _check_step(step)
    x = np.asarray(x, dtype=float)
    d_theta = np.zeros(fam.n)
    d_v = np.zeros(fam.n)
    for k, c in _STENCIL:
        moved = act_tangent(action, k * step * x, fam, tc)
        d_theta += c * (moved.base - tc.base)
        d_v += c * (moved.coeffs - tc.coeffs)
    # natural parameters are affine for the exponential connection: no correction term
    return SplitTangent(tc, d_theta / step, d_v / step)


def comoment_differential(comoment: Comoment, x, tc: TangentCoord, probe: SplitTangent, step: float = 1e-2) -> float:
    """Five-point derivative along ``probe``.

    The step balances the O(step^4) truncation against cancellation, which is
    what limits how exactly constant shifts of the comoment drop out.
    """
    _check_step(step)
    return sum(c * comoment(x, tc.base + k * step * probe.horiz, tc.coeffs + k * step * probe.vert)
               for k, c in _STENCIL) / step


def moment_residual(action: GroupAction, fam: ExponentialFamily, comoment: Comoment, x,
                    tc: TangentCoord, probe: SplitTangent, step: float = 1e-2) -> float:
    """``|d(mu*(X))(probe) - omega(X#, probe)|``."""
    lhs = comoment_differential(comoment, x, tc, probe, step)
    xs = fundamental_field(action, x, fam, tc)
    probe = SplitTangent(xs.base, probe.horiz, probe.vert)
    return float(abs(lhs - dom_symplectic(fam, xs, probe)))


def line_integral_comoment(action: GroupAction, fam: ExponentialFamily, origin, order: int = 16) -> Comoment:
    """Comoment built by integrating ``omega(X#, .)`` along straight chart paths from ``(origin, 0)``.

    It is normalized to vanish at ``(origin, 0)``; a constant is the only freedom.
    """
    origin = np.asarray(origin, dtype=float)
    nodes, weights = roots_legendre(order)
    s_nodes, s_weights = 0.5 * (nodes + 1), 0.5 * weights

    def comoment(x, theta, v):
        theta = np.asarray(theta, dtype=float)
        v = np.asarray(v, dtype=float)
        dtheta, dv = theta - origin, v
        total = 0.0
        for s, w in zip(s_nodes, s_weights):
            tc = TangentCoord(origin + s * dtheta, s * v)
            xs = fundamental_field(action, x, fam, tc)
            total += w * dom_symplectic(fam, xs, SplitTangent(tc, dtheta, dv))
        return float(total)

    return comoment


def translation_comoment(action: GroupAction) -> Comoment:
    """Closed form ``mu*(X)(theta, v) = <proj X, v>`` for the unit-variance location model."""
    dim = action.algebra.dim - action.stabilizer_basis.shape[0]

    def comoment(x, theta, v):
        return float(np.asarray(x, dtype=float)[:dim] @ np.asarray(v, dtype=float))

    return comoment


def in_annihilator(alg: LieAlgebra, c, tol: float = 1e-12) -> bool:
    """Whether ``c`` vanishes on ``[g, g]``."""
    c = np.asarray(c, dtype=float)
    eye = np.eye(alg.dim)
    return all(abs(c @ bracket(alg, eye[i], eye[j])) <= tol for i in range(alg.dim) for j in range(alg.dim))


def shift_comoment(comoment: Comoment, c, algebra: LieAlgebra) -> Comoment:
    """``X -> mu*(X) - <c, X>`` for ``c`` in the annihilator of ``[g, g]``."""
    c = np.asarray(c, dtype=float)
    if not in_annihilator(algebra, c):
        raise NotInAnnihilator("shift must vanish on [g, g]")

    def shifted(x, theta, v):
        return comoment(x, theta, v) - float(c @ np.asarray(x, dtype=float))

    return shifted


def moment_map(comoment: Comoment, algebra: LieAlgebra, tc: TangentCoord) -> np.ndarray:
    """The functional ``lam_i = mu*(e_i)(theta, v)``."""
    return np.array([comoment(e, tc.base, tc.coeffs) for e in np.eye(algebra.dim)])


__all__ = [
    "GroupAction", "TransformationModel", "NodeMap", "translation_action", "cyclic_action",
    "heisenberg_center_action", "gaussian_translation_model", "categorical_cyclic_model", "node_map",
    "translate", "act_density", "act_tangent", "push_split", "tangent_function_residual",
    "equivariance_residual", "isometry_residual", "kahler_preservation_residual",
    "fubini_study_preservation_residual", "fundamental_field", "moment_residual",
    "line_integral_comoment", "translation_comoment", "in_annihilator", "shift_comoment", "moment_map",
]
