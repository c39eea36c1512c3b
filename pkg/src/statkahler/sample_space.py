"""Discretized measure spaces.

Every integral over the sample space in this package is a weighted sum over
the nodes of a :class:`SampleSpace`.  Identities that hold for an arbitrary
measure space therefore hold *exactly* (up to round-off) for the discrete
measure ``sum_i w_i delta_{x_i}``; quadrature error only enters when results
are compared against closed forms for the continuous measure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from scipy.special import roots_hermite

from .errors import ActionLeavesGrid, InvalidDescriptor, NonFiniteIntegrand, SpaceMismatch

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class FiniteCounting:
    n: int


@dataclass(frozen=True)
class UniformGrid:
    lo: float
    hi: float
    count: int
    periodic: bool = False


@dataclass(frozen=True)
class GaussHermite:
    order: int
    center: float = 0.0
    scale: float = 1.0


@dataclass(frozen=True)
class Product:
    factors: tuple


Descriptor = Union[FiniteCounting, UniformGrid, GaussHermite, Product]


@dataclass(frozen=True, eq=False)
class SampleSpace:
    """Quadrature nodes and positive weights standing in for ``(X, mu)``.

    ``nodes`` has shape ``(m, d)``.  ``tolerance`` is the self-reported
    integration error, estimated by refining the node count once.
    """

    nodes: np.ndarray
    weights: np.ndarray
    descriptor: Descriptor
    tolerance: float
    shape: tuple = field(default=())

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    @property
    def points(self) -> np.ndarray:
        """Nodes as a flat vector when ``dim == 1``, else ``(m, d)``."""
        return self.nodes[:, 0] if self.dim == 1 else self.nodes

    @property
    def is_periodic(self) -> bool:
        return all(isinstance(a, UniformGrid) and a.periodic for a in _axes(self.descriptor))

    def locate(self, points) -> np.ndarray:
        """Node indices of ``points`` on a periodic grid, wrapping around the seam.

        Raises :class:`ActionLeavesGrid` for non-periodic spaces or points that
        do not coincide with a node.
        """
        if not self.is_periodic:
            raise ActionLeavesGrid("node lookup requires a periodic grid")
        pts = np.asarray(points, dtype=float).reshape(-1, self.dim)
        idx = []
        for j, ax in enumerate(_axes(self.descriptor)):
            h = (ax.hi - ax.lo) / ax.count
            k = (pts[:, j] - ax.lo) / h
            kr = np.rint(k)
            if np.any(np.abs(k - kr) > 1e-9 * max(1.0, np.max(np.abs(k)))):
                raise ActionLeavesGrid(f"point off grid along axis {j}")
            idx.append(np.mod(kr.astype(np.int64), ax.count))
        return np.ravel_multi_index(tuple(idx), self.shape)


@dataclass(frozen=True, eq=False)
class L2Function:
    values: np.ndarray
    space: SampleSpace

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.space.size,):
            raise SpaceMismatch(f"expected {self.space.size} values, got {vals.shape}")
        object.__setattr__(self, "values", vals)

    def __add__(self, other):
        _same_space(self.space, other.space)
        return L2Function(self.values + other.values, self.space)

    def __sub__(self, other):
        _same_space(self.space, other.space)
        return L2Function(self.values - other.values, self.space)

    def __mul__(self, scalar):
        return L2Function(self.values * scalar, self.space)

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.sqrt(l2_inner(self.space, self, self).real))


def _axes(desc):
    if isinstance(desc, Product):
        out = []
        for f in desc.factors:
            out.extend(_axes(f))
        return out
    return [desc]


def _same_space(a: SampleSpace, b: SampleSpace):
    if a is b:
        return
    if a.size != b.size or not (np.array_equal(a.nodes, b.nodes) and np.array_equal(a.weights, b.weights)):
        raise SpaceMismatch("functions live on different sample spaces")


def _raw_rule(desc) -> tuple[np.ndarray, np.ndarray]:
    """Nodes ``(m, d)`` and weights ``(m,)`` for a descriptor, validating parameters."""
    if isinstance(desc, FiniteCounting):
        if int(desc.n) != desc.n or desc.n < 2:
            raise InvalidDescriptor(f"FiniteCounting needs n >= 2, got {desc.n}")
        return np.arange(desc.n, dtype=float)[:, None], np.ones(desc.n)
    if isinstance(desc, UniformGrid):
        if int(desc.count) != desc.count or desc.count < 2:
            raise InvalidDescriptor(f"UniformGrid needs count >= 2, got {desc.count}")
        if not (np.isfinite(desc.lo) and np.isfinite(desc.hi) and desc.hi > desc.lo):
            raise InvalidDescriptor(f"UniformGrid needs lo < hi, got ({desc.lo}, {desc.hi})")
        if desc.periodic:
            h = (desc.hi - desc.lo) / desc.count
            x = desc.lo + h * np.arange(desc.count)
            return x[:, None], np.full(desc.count, h)
        x = np.linspace(desc.lo, desc.hi, desc.count)
        h = (desc.hi - desc.lo) / (desc.count - 1)
        w = np.full(desc.count, h)
        w[0] = w[-1] = h / 2
        return x[:, None], w
    if isinstance(desc, GaussHermite):
        if int(desc.order) != desc.order or desc.order < 2:
            raise InvalidDescriptor(f"GaussHermite needs order >= 2, got {desc.order}")
        if not desc.scale > 0:
            raise InvalidDescriptor(f"GaussHermite needs scale > 0, got {desc.scale}")
        t, w = roots_hermite(int(desc.order))
        keep = w > 0  # very high orders underflow the outermost weights
        t, w = t[keep], w[keep]
        # rule for plain Lebesgue measure: absorb the e^{-t^2} weight
        lw = np.log(w) + t**2 + np.log(np.sqrt(2.0) * desc.scale)
        x = desc.center + np.sqrt(2.0) * desc.scale * t
        return x[:, None], np.exp(lw)
    if isinstance(desc, Product):
        if not desc.factors:
            raise InvalidDescriptor("Product needs at least one factor")
        rules = [_raw_rule(f) for f in desc.factors]
        nodes, weights = rules[0]
        for nx, wx in rules[1:]:
            m, k = nodes.shape[0], nx.shape[0]
            nodes = np.hstack([np.repeat(nodes, k, axis=0), np.tile(nx, (m, 1))])
            weights = np.outer(weights, wx).ravel()
        return nodes, weights
    raise InvalidDescriptor(f"unknown descriptor {desc!r}")


def _refined(desc):
    if isinstance(desc, FiniteCounting):
        return desc
    if isinstance(desc, UniformGrid):
        return UniformGrid(desc.lo, desc.hi, 2 * desc.count - (0 if desc.periodic else 1), desc.periodic)
    if isinstance(desc, GaussHermite):
        return GaussHermite(2 * desc.order, desc.center, desc.scale)
    return Product(tuple(_refined(f) for f in desc.factors))


def _reference_integrand(desc) -> Callable[[np.ndarray], np.ndarray]:
    """A smooth test function adapted to the descriptor, used for the tolerance estimate."""
    axes = _axes(desc)

    def f(x):
        out = np.ones(x.shape[0])
        for j, ax in enumerate(axes):
            xj = x[:, j]
            if isinstance(ax, GaussHermite):
                z = (xj - ax.center) / ax.scale
                out = out * np.exp(-0.5 * z**2) * np.cos(z) / ax.scale
            elif isinstance(ax, UniformGrid):
                z = (xj - ax.lo) / (ax.hi - ax.lo)
                out = out * (np.exp(np.cos(2 * np.pi * z)) if ax.periodic else np.exp(z))
        return out

    return f


def build_space(descriptor: Descriptor) -> SampleSpace:
    nodes, weights = _raw_rule(descriptor)
    if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
        raise InvalidDescriptor("quadrature produced non-positive weights")
    shape = tuple(_raw_rule(a)[1].shape[0] for a in _axes(descriptor))
    floor = 64 * _EPS * max(1.0, float(weights.sum()))
    if isinstance(descriptor, FiniteCounting):
        tol = floor
    else:
        tol = max(floor, refinement_error(descriptor, _reference_integrand(descriptor), _rule=(nodes, weights)))
    return SampleSpace(nodes, weights, descriptor, tol, shape)


def tensor_product(*spaces: SampleSpace) -> SampleSpace:
    return build_space(Product(tuple(s.descriptor for s in spaces)))


def refinement_error(descriptor: Descriptor, f: Callable[[np.ndarray], np.ndarray], _rule=None) -> float:
    """``|I_N(f) - I_2N(f)|`` where ``f`` maps an ``(m, d)`` node array to values."""
    nodes, weights = _rule if _rule is not None else _raw_rule(descriptor)
    fine_nodes, fine_weights = _raw_rule(_refined(descriptor))
    return float(abs(weights @ f(nodes) - fine_weights @ f(fine_nodes)))


def integrate(space: SampleSpace, f) -> float:
    """Weighted node sum; a trailing axis of length ``space.size`` is contracted."""
    vals = np.asarray(f)
    if vals.shape[-1] != space.size:
        raise SpaceMismatch(f"integrand has {vals.shape[-1]} values for {space.size} nodes")
    if not np.all(np.isfinite(vals)):
        raise NonFiniteIntegrand("integrand is not finite at every node")
    return vals @ space.weights


def l2_inner(space: SampleSpace, f: L2Function, g: L2Function) -> complex:
    """``<f, g> = sum_i w_i conj(f_i) g_i``; conjugate-linear in ``f``."""
    _same_space(space, f.space)
    _same_space(space, g.space)
    if f is g:
        return complex(np.sum(space.weights * np.abs(f.values) ** 2))
    return complex(np.sum(space.weights * np.conj(f.values) * g.values))
