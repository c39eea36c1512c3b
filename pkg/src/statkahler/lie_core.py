"""Nilpotent Lie algebras from structure constants.

Algebra elements and dual elements are plain coordinate vectors.  Group
elements are exponential coordinates ``X`` standing for ``exp(X)``; the group
law is the Baker-Campbell-Hausdorff series, which terminates for the step <= 4
algebras supported here.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial

import numpy as np

from .errors import DimMismatch, InvalidDescriptor, UnsupportedStep

MAX_STEP = 4


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """``structure[i, j, k] = c^k_ij`` with ``[e_i, e_j] = sum_k c^k_ij e_k``."""

    structure: np.ndarray
    name: str = "custom"
    exact: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        c = np.asarray(self.structure, dtype=float)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise InvalidDescriptor(f"structure constants need shape (d, d, d), got {c.shape}")
        if np.any(c != -np.transpose(c, (1, 0, 2))):
            raise InvalidDescriptor("structure constants are not antisymmetric")
        object.__setattr__(self, "structure", c)
        if jacobi_residual(self) != 0:
            raise InvalidDescriptor(f"Jacobi identity fails (residual {jacobi_residual(self)})")

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    @property
    def basis(self) -> np.ndarray:
        return np.eye(self.dim)

    @cached_property
    def nilpotency_step(self) -> int:
        dims = lower_central_series(self)
        return len(dims) - 1 if dims[-1] == 0 else -1


def from_rational_table(dim: int, table, name: str = "custom") -> LieAlgebra:
    """Build from ``{(i, j): {k: (num, den)}}`` entries with ``i < j``; antisymmetry is filled in."""
    exact = np.full((dim, dim, dim), Fraction(0), dtype=object)
    for (i, j), row in table.items():
        if not (0 <= i < dim and 0 <= j < dim) or i == j:
            raise InvalidDescriptor(f"bad bracket index pair ({i}, {j})")
        for k, val in row.items():
            num, den = val if isinstance(val, (tuple, list)) else (val, 1)
            if den == 0:
                raise InvalidDescriptor(f"zero denominator in [e{i}, e{j}]")
            exact[i, j, k] = Fraction(num, den)
            exact[j, i, k] = -Fraction(num, den)
    return LieAlgebra(exact.astype(float), name, exact)


def abelian(n: int) -> LieAlgebra:
    return from_rational_table(n, {}, name=f"abelian({n})")


def heisenberg(dim: int = 3) -> LieAlgebra:
    """Basis ``X_1..X_k, Y_1..Y_k, Z`` with ``[X_i, Y_i] = Z``."""
    if dim < 3 or dim % 2 == 0:
        raise InvalidDescriptor(f"Heisenberg algebras have odd dimension >= 3, got {dim}")
    k = (dim - 1) // 2
    return from_rational_table(dim, {(i, k + i): {dim - 1: 1} for i in range(k)}, name=f"heisenberg({dim})")


def filiform4() -> LieAlgebra:
    """Step-3 filiform algebra: ``[e1, e2] = e3``, ``[e1, e3] = e4``."""
    return from_rational_table(4, {(0, 1): {2: 1}, (0, 2): {3: 1}}, name="filiform4")


CATALOG = {"abelian": abelian, "heisenberg": heisenberg, "filiform4": filiform4}


def jacobi_residual(alg: LieAlgebra):
    """Max |[x,[y,z]] + [y,[z,x]] + [z,[x,y]]| over basis triples; exact when rational."""
    c = alg.exact if alg.exact is not None else alg.structure
    # J[i,j,k,m] = sum_l c^l_jk c^m_il + c^l_ki c^m_jl + c^l_ij c^m_kl
    t1 = np.einsum("jkl,ilm->ijkm", c, c)
    jac = t1 + np.einsum("kil,jlm->ijkm", c, c) + np.einsum("ijl,klm->ijkm", c, c)
    return max((abs(v) for v in jac.ravel()), default=0)


def _check(alg: LieAlgebra, *vecs):
    out = []
    for v in vecs:
        v = np.asarray(v, dtype=float)
        if v.shape != (alg.dim,):
            raise DimMismatch(f"expected a vector of length {alg.dim}, got shape {v.shape}")
        out.append(v)
    return out


def bracket(alg: LieAlgebra, x, y) -> np.ndarray:
    x, y = _check(alg, x, y)
    return np.einsum("i,j,ijk->k", x, y, alg.structure)


def ad_matrix(alg: LieAlgebra, x) -> np.ndarray:
    """``ad_x`` acting on column vectors: ``ad_x @ y == bracket(x, y)``."""
    (x,) = _check(alg, x)
    return np.einsum("i,ijk->kj", x, alg.structure)


def lower_central_series(alg: LieAlgebra) -> list[int]:
    """Dimensions of g, [g, g], [g, [g, g]], ... down to 0 (or until it stabilizes)."""
    d = alg.dim
    dims = [d]
    span = np.eye(d)
    while span.shape[0]:
        gens = np.einsum("ai,bj,ijk->abk", np.eye(d), span, alg.structure).reshape(-1, d)
        span = _row_basis(gens)
        if span.shape[0] == dims[-1]:
            break
        dims.append(span.shape[0])
    return dims


def _row_basis(rows, tol=1e-10) -> np.ndarray:
    """Orthonormal basis (as rows) of the span of ``rows``."""
    rows = np.asarray(rows, dtype=float)
    if rows.shape[0] == 0:
        return rows
    _, s, vt = np.linalg.svd(rows, full_matrices=False)
    return vt[: int(np.sum(s > tol * max(1.0, s[0])))]


def adjoint(alg: LieAlgebra, g) -> np.ndarray:
    """``Ad_{exp g} = exp(ad_g)``; the series is finite because ``ad_g`` is nilpotent."""
    a = ad_matrix(alg, g)
    out = np.eye(alg.dim)
    term = np.eye(alg.dim)
    for k in range(1, alg.dim + 1):
        term = term @ a
        if not np.any(term):
            break
        out = out + term / factorial(k)
    return out


def bch(alg: LieAlgebra, x, y) -> np.ndarray:
    """``log(exp x exp y)`` through degree four."""
    x, y = _check(alg, x, y)
    step = alg.nilpotency_step
    if step < 0 or step > MAX_STEP:
        raise UnsupportedStep(f"{alg.name} has nilpotency step {step}; only <= {MAX_STEP} supported")
    br = lambda a, b: bracket(alg, a, b)  # noqa: E731
    xy = br(x, y)
    z = x + y + 0.5 * xy
    if step >= 3:
        z = z + (br(x, xy) + br(y, -xy)) / 12.0
    if step >= 4:
        z = z - br(y, br(x, xy)) / 24.0
    return z


def coadjoint(alg: LieAlgebra, g, lam) -> np.ndarray:
    """``Ad*_g lam`` defined by ``<Ad*_g lam, Y> = <lam, Ad_{g^-1} Y>``."""
    g, lam = _check(alg, g, lam)
    return adjoint(alg, -g).T @ lam


def skew_form(alg: LieAlgebra, lam) -> np.ndarray:
    """``B_lam[i, j] = lam([e_i, e_j])``."""
    (lam,) = _check(alg, lam)
    return alg.structure @ lam


def orbit_dimension(alg: LieAlgebra, lam, tol: float = 1e-10) -> int:
    """Rank of the vectors ``ad*_{e_i} lam``, i.e. of the skew form ``B_lam``."""
    b = skew_form(alg, lam)
    if not np.any(b):
        return 0
    s = np.linalg.svd(b, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))
