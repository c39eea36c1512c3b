"""Exponential families in natural parameters.

A family is ``p(x; theta) = exp(C(x) + sum_k theta^k F_k(x) - psi(theta))``
with respect to the measure of its :class:`~statkahler.sample_space.SampleSpace`.
Natural parameters are the only chart used anywhere in the package.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import BadIndex, InvalidDescriptor, OutOfDomain, PartitionDiverged
from .sample_space import FiniteCounting, L2Function, SampleSpace, build_space, integrate


@dataclass(frozen=True, eq=False)
class TangentCoord:
    """A point ``(p, v)`` of TM: base parameter and tangent coefficients."""

    base: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", np.atleast_1d(np.asarray(self.base, dtype=float)))
        object.__setattr__(self, "coeffs", np.atleast_1d(np.asarray(self.coeffs, dtype=float)))
        if self.base.shape != self.coeffs.shape:
            raise ValueError("base and coeffs must have the same length")


@dataclass(frozen=True, eq=False)
class ExponentialFamily:
    space: SampleSpace
    base: np.ndarray
    carriers: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        base = np.asarray(self.base, dtype=float)
        carriers = np.atleast_2d(np.asarray(self.carriers, dtype=float))
        m = self.space.size
        if base.shape != (m,) or carriers.shape[1] != m:
            raise InvalidDescriptor("base/carriers must be tabulated on every node")
        stacked = np.vstack([np.ones(m), carriers])
        if np.linalg.matrix_rank(stacked) < stacked.shape[0]:
            raise InvalidDescriptor("{1, F_1, ..., F_n} are linearly dependent on the nodes")
        lower = np.broadcast_to(np.asarray(self.lower, dtype=float), (carriers.shape[0],)).copy()
        upper = np.broadcast_to(np.asarray(self.upper, dtype=float), (carriers.shape[0],)).copy()
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "carriers", carriers)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def n(self) -> int:
        return self.carriers.shape[0]

    def check(self, theta) -> np.ndarray:
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        if theta.shape != (self.n,):
            raise OutOfDomain(f"expected {self.n} parameters, got shape {theta.shape}")
        if np.any(theta < self.lower) or np.any(theta > self.upper):
            raise OutOfDomain(f"theta={theta} outside box [{self.lower}, {self.upper}]")
        return theta

    def _exponent(self, theta):
        return self.base + theta @ self.carriers

    def _shifted(self, theta):
        # (z - max z, log of the normalizer of exp(z - max z), max z)
        z = self._exponent(theta)
        shift = np.max(z)
        if not np.isfinite(shift):
            raise PartitionDiverged(f"exponent not finite at theta={theta}")
        log_mass = np.log(integrate(self.space, np.exp(z - shift)))
        if not np.isfinite(log_mass):
            raise PartitionDiverged(f"log-partition diverged at theta={theta}")
        return z - shift, log_mass, shift

    def log_partition(self, theta) -> float:
        theta = self.check(theta)
        _, log_mass, shift = self._shifted(theta)
        return float(shift + log_mass)

    def density(self, theta, index=None):
        """Density at every node (or at node ``index``)."""
        theta = self.check(theta)
        centered, log_mass, _ = self._shifted(theta)
        p = np.exp(centered - log_mass)
        return p if index is None else p[index]

    def _probability(self, theta):
        # node probabilities p_i w_i
        return self.density(theta) * self.space.weights

    def mean(self, theta) -> np.ndarray:
        """``d psi = E[F]``."""
        return self.carriers @ self._probability(theta)

    def covariance(self, theta) -> np.ndarray:
        """``Hess psi = Cov[F]``."""
        q = self._probability(theta)
        c = self.carriers - (self.carriers @ q)[:, None]
        return (c * q) @ c.T

    def third_cumulant(self, theta) -> np.ndarray:
        """``d^3 psi = E[(F - EF)^{x3}]``, shape ``(n, n, n)``."""
        q = self._probability(theta)
        c = self.carriers - (self.carriers @ q)[:, None]
        return np.einsum("im,jm,km,m->ijk", c, c, c, q)

    def score(self, theta, i=None) -> np.ndarray:
        """``d_i log p = F_i - d_i psi``; all components ``(n, m)`` or row ``i``."""
        theta = self.check(theta)
        s = self.carriers - self.mean(theta)[:, None]
        if i is None:
            return s
        if not (isinstance(i, (int, np.integer)) and 0 <= i < self.n):
            raise BadIndex(f"score index {i} out of range for n={self.n}")
        return s[i]

    def tangent_function(self, tc: TangentCoord) -> L2Function:
        """The function ``v(x) = sum_k v^k F_k(x) - d_v psi`` identified with ``tc``."""
        return L2Function(tc.coeffs @ self.score(tc.base), self.space)


def gaussian_location(space: SampleSpace, bound: float = 5.0) -> ExponentialFamily:
    """Unit-variance normal family with mean ``theta`` in ``space.dim`` dimensions."""
    x = space.nodes
    d = space.dim
    base = -0.5 * np.sum(x**2, axis=1) - 0.5 * d * np.log(2 * np.pi)
    return ExponentialFamily(space, base, x.T.copy(), -bound, bound, name="gaussian_location")


def gaussian_location_scale(space: SampleSpace, mean_bound: float = 5.0,
                            precision_range=(0.1, 10.0)) -> ExponentialFamily:
    """Normal family with carriers ``(x, x^2)``; ``theta_2 = -1/(2 sigma^2)``."""
    if space.dim != 1:
        raise InvalidDescriptor("gaussian_location_scale needs a 1-d space")
    x = space.points
    lo, hi = precision_range
    return ExponentialFamily(
        space,
        np.zeros(space.size),
        np.vstack([x, x**2]),
        [-mean_bound, -hi / 2],
        [mean_bound, -lo / 2],
        name="gaussian_location_scale",
    )


def categorical(n: int, bound: float = 10.0) -> ExponentialFamily:
    """Positive distributions on ``n`` atoms; ``F_i(x_j) = delta_ij`` for ``i < n``."""
    space = build_space(FiniteCounting(n))
    return ExponentialFamily(space, np.zeros(n), np.eye(n)[: n - 1], -bound, bound, name=f"categorical({n})")


def poisson_truncated(kmax: int, bound: float = 3.0) -> ExponentialFamily:
    """Poisson family restricted to ``{0, ..., kmax}``; ``theta`` is the log-rate."""
    space = build_space(FiniteCounting(kmax + 1))
    k = space.points
    return ExponentialFamily(space, -gammaln(k + 1), k[None, :], -bound, bound, name=f"poisson_truncated({kmax})")
