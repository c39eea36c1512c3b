"""Coadjoint orbits, polarizations and induced representations on periodic grids.

Homogeneous spaces ``G/K`` are coordinatized by a section
``s(y) = exp(sum_j y_j c_j)`` over complement vectors ``c_j`` and discretized
by a periodic product grid in ``y``.  Only grid-aligned group elements are
allowed, so every left translation is an exact permutation of grid nodes
(times phases for induced representations).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .errors import (
    ActionLeavesGrid,
    NotInSubalgebra,
    PolarizationNotFound,
    StabilizerObstruction,
)
from .lie_core import LieAlgebra, _row_basis, bch, bracket, coadjoint, orbit_dimension, skew_form
from .sample_space import SampleSpace, UniformGrid, build_space, tensor_product

ISOTROPY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CoadjointOrbit:
    seed: np.ndarray
    samples: np.ndarray
    dimension: int


def orbit_of(alg: LieAlgebra, lam, sample_count: int = 64, radius: float = 2.0, seed: int = 0) -> CoadjointOrbit:
    """Sample ``Ad*_g lam`` over a scrambled Sobol cloud of ``g`` in ``[-radius, radius]^d``."""
    lam = np.asarray(lam, dtype=float)
    sampler = qmc.Sobol(alg.dim, scramble=True, seed=seed)
    gs = radius * (2 * sampler.random(sample_count) - 1)
    samples = np.vstack([lam] + [coadjoint(alg, g, lam) for g in gs])
    dim = orbit_dimension(alg, lam)
    ranks = {orbit_dimension(alg, s) for s in samples}
    if ranks != {dim}:
        raise ArithmeticError(f"orbit rank not constant along samples: {sorted(ranks)}")
    return CoadjointOrbit(lam, samples, dim)


# -- subalgebras and polarizations ------------------------------------------------

def _in_span(rows: np.ndarray, v: np.ndarray, tol: float = 1e-10) -> bool:
    if rows.shape[0] == 0:
        return not np.any(np.abs(v) > tol)
    coef, *_ = np.linalg.lstsq(rows.T, v, rcond=None)
    return bool(np.max(np.abs(rows.T @ coef - v)) <= tol * max(1.0, np.max(np.abs(v))))


def subalgebra_closure(alg: LieAlgebra, gens) -> np.ndarray:
    """Rows spanning the subalgebra generated by ``gens``; the generators are kept verbatim."""
    rows = np.zeros((0, alg.dim))
    for v in np.atleast_2d(np.asarray(gens, dtype=float)).reshape(-1, alg.dim):
        if not _in_span(rows, v):
            rows = np.vstack([rows, v])
    grew = True
    while grew:
        grew = False
        for a, b in itertools.combinations(list(rows), 2):
            br = bracket(alg, a, b)
            if not _in_span(rows, br):
                rows = np.vstack([rows, br])
                grew = True
    return rows


def isotropy_defect(alg: LieAlgebra, lam, rows) -> float:
    """``max |lam([b_i, b_j])|`` over the rows."""
    rows = np.asarray(rows, dtype=float).reshape(-1, alg.dim)
    if rows.shape[0] < 2:
        return 0.0
    return float(np.max(np.abs(rows @ skew_form(alg, lam) @ rows.T)))


def _candidates(dim: int) -> list[np.ndarray]:
    eye = np.eye(dim)
    out = [eye[i] for i in reversed(range(dim))]
    coeffs = (-2, -1, 1, 2)
    for i, j in itertools.combinations(range(dim), 2):
        for a, b in itertools.product(coeffs, coeffs):
            out.append(a * eye[i] + b * eye[j])
    return out


@dataclass(frozen=True, eq=False)
class Polarization:
    basis: np.ndarray
    lam: np.ndarray
    algebra: LieAlgebra

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, x) -> bool:
        return _in_span(self.basis, np.asarray(x, dtype=float))

    def subalgebra_defect(self) -> float:
        """Distance of pairwise brackets from the span of the basis."""
        worst = 0.0
        for a, b in itertools.product(self.basis, self.basis):
            br = bracket(self.algebra, a, b)
            if self.basis.shape[0]:
                coef, *_ = np.linalg.lstsq(self.basis.T, br, rcond=None)
                br = br - self.basis.T @ coef
            worst = max(worst, float(np.max(np.abs(br))) if br.size else 0.0)
        return worst

    def isotropy_defect(self) -> float:
        return isotropy_defect(self.algebra, self.lam, self.basis)

    def is_maximal(self) -> bool:
        """No rational candidate outside the span extends it to a larger isotropic subalgebra."""
        for v in _candidates(self.algebra.dim):
            if self.contains(v):
                continue
            ext = subalgebra_closure(self.algebra, np.vstack([self.basis, v]))
            if isotropy_defect(self.algebra, self.lam, ext) <= ISOTROPY_TOL:
                return False
        return True


def polarize(alg: LieAlgebra, lam, require_contains=None) -> Polarization:
    """A maximal subalgebra ``h`` with ``lam([h, h]) = 0`` of dimension ``dim g - dim O / 2``.

    Depth-first search over extensions by standard basis vectors and small
    integer combinations of pairs of them.
    """
    lam = np.asarray(lam, dtype=float)
    target = alg.dim - orbit_dimension(alg, lam) // 2
    start = np.zeros((0, alg.dim))
    if require_contains is not None and np.size(require_contains):
        start = subalgebra_closure(alg, require_contains)
        if isotropy_defect(alg, lam, start) > ISOTROPY_TOL:
            raise PolarizationNotFound("required subalgebra is not isotropic for lam")
    cands = _candidates(alg.dim)
    seen = set()

    def key(rows):
        q = _row_basis(rows)
        return tuple(np.round(q.T @ q, 8).ravel())

    def search(rows):
        if rows.shape[0] == target:
            return rows
        for v in cands:
            if _in_span(rows, v):
                continue
            ext = subalgebra_closure(alg, np.vstack([rows, v]))
            if ext.shape[0] > target or isotropy_defect(alg, lam, ext) > ISOTROPY_TOL:
                continue
            k = key(ext)
            if k in seen:
                continue
            seen.add(k)
            found = search(ext)
            if found is not None:
                return found
        return None

    rows = search(start)
    if rows is None:
        raise PolarizationNotFound(f"no isotropic subalgebra of dimension {target} for lam={lam}")
    pol = Polarization(rows, lam, alg)
    if pol.dim != target:  # pragma: no cover - guarded by the search itself
        raise PolarizationNotFound("dimension relation violated")
    return pol


def character(pol: Polarization, x) -> complex:
    """``sigma_lam(exp x) = exp(2 pi i lam(x))`` for ``x`` in the polarization."""
    x = np.asarray(x, dtype=float)
    if not pol.contains(x):
        raise NotInSubalgebra(f"{x} is not in the polarizing subalgebra")
    return complex(np.exp(2j * np.pi * (pol.lam @ x)))


# -- homogeneous spaces on periodic grids ----------------------------------------

def complement_basis(alg: LieAlgebra, sub, prefer=None) -> np.ndarray:
    """Vectors completing ``sub`` to a basis, drawn from ``prefer`` first, then standard vectors."""
    rows = np.asarray(sub, dtype=float).reshape(-1, alg.dim)
    pool = [] if prefer is None else list(np.asarray(prefer, dtype=float).reshape(-1, alg.dim))
    pool += list(np.eye(alg.dim))
    comp = []
    for v in pool:
        if not _in_span(np.vstack([rows] + comp) if comp else rows, v):
            comp.append(v[None, :])
        if rows.shape[0] + len(comp) == alg.dim:
            break
    return np.vstack(comp) if comp else np.zeros((0, alg.dim))


@dataclass(frozen=True, eq=False)
class Quotient:
    """``G/K`` with section ``y -> exp(y @ complement)`` and a periodic grid in ``y``."""

    algebra: LieAlgebra
    sub: np.ndarray
    complement: np.ndarray
    grid: SampleSpace | None
    periods: np.ndarray

    @property
    def size(self) -> int:
        return 1 if self.grid is None else self.grid.size

    @property
    def nodes(self) -> np.ndarray:
        if self.grid is None:
            return np.zeros((1, 0))
        return self.grid.nodes

    @property
    def weights(self) -> np.ndarray:
        return np.ones(1) if self.grid is None else self.grid.weights

    def section(self, y) -> np.ndarray:
        return np.asarray(y, dtype=float) @ self.complement

    def decompose(self, w, tol: float = 1e-14):
        """Split ``exp(w) = s(y) exp(k)`` with ``k`` in the subalgebra."""
        r = self.complement.shape[0]
        frame = np.vstack([self.complement, self.sub])
        y = np.linalg.solve(frame.T, w)[:r]
        for _ in range(4 * self.algebra.dim + 4):
            k = bch(self.algebra, -self.section(y), w)
            delta = np.linalg.solve(frame.T, k)[:r]
            if np.max(np.abs(delta), initial=0.0) <= tol * max(1.0, np.max(np.abs(w))):
                return y, k
            y = y + delta
        raise ArithmeticError("coset decomposition did not converge")

    def locate(self, y) -> int:
        if self.grid is None:
            return 0
        return int(self.grid.locate(y)[0])

    def left_translation(self, g) -> np.ndarray:
        """Node map ``i -> index of g^-1 y_i`` together with the subgroup parts."""
        g = np.asarray(g, dtype=float)
        idx = np.empty(self.size, dtype=np.int64)
        parts = np.empty((self.size, self.algebra.dim))
        for i, y in enumerate(self.nodes):
            y2, k = self.decompose(bch(self.algebra, -g, self.section(y)))
            idx[i] = self.locate(y2)
            parts[i] = k
        return idx, parts


def quotient(alg: LieAlgebra, sub, periods, counts, complement=None) -> Quotient:
    """Build ``G/K`` for ``K = exp(span(sub))`` on periodic axes ``[0, L_j)``.

    ``periods`` and ``counts`` give one entry per complement vector (scalars
    broadcast).
    """
    sub = np.asarray(sub, dtype=float).reshape(-1, alg.dim)
    if sub.shape[0]:
        sub = subalgebra_closure(alg, sub)
    comp = complement_basis(alg, sub) if complement is None else np.asarray(complement, dtype=float)
    r = comp.shape[0]
    if r == 0:
        return Quotient(alg, sub, comp.reshape(0, alg.dim), None, np.zeros(0))
    periods = np.broadcast_to(np.asarray(periods, dtype=float), (r,)).copy()
    counts = np.broadcast_to(np.asarray(counts, dtype=int), (r,)).copy()
    axes = [build_space(UniformGrid(0.0, float(L), int(c), periodic=True)) for L, c in zip(periods, counts)]
    grid = axes[0] if r == 1 else tensor_product(*axes)
    return Quotient(alg, sub, comp, grid, periods)


def induced_rep_operator(alg: LieAlgebra, pol: Polarization, g, grid: Quotient) -> np.ndarray:
    """Matrix of ``ind_H^G(sigma_lam)(g)`` on functions over the ``G/H`` grid.

    ``(pi(g) phi)(y) = sigma(k)^{-1} phi(y')`` where ``g^-1 s(y) = s(y') k``.
    The phase must be periodic on the compactified grid; otherwise the element
    is rejected with :class:`ActionLeavesGrid`.
    """
    g = np.asarray(g, dtype=float)
    m = grid.size
    mat = np.zeros((m, m), dtype=complex)
    for i, y in enumerate(grid.nodes):
        j, phase = _induced_entry(alg, pol, g, grid, y)
        for a, period in enumerate(grid.periods):
            shifted = y.copy()
            shifted[a] += period
            j2, phase2 = _induced_entry(alg, pol, g, grid, shifted)
            if j2 != j or abs(phase2 - phase) > 1e-9:
                raise ActionLeavesGrid("cocycle is not periodic on the grid for this group element")
        mat[i, j] = phase
    return mat


def _induced_entry(alg, pol, g, grid, y):
    y2, k = grid.decompose(bch(alg, -g, grid.section(y)))
    return grid.locate(y2), np.exp(-2j * np.pi * (pol.lam @ k))


def intertwiner(alg: LieAlgebra, pol: Polarization, g0, grid: Quotient) -> tuple[np.ndarray, Polarization]:
    """Right translation by ``g0`` from ``ind(sigma_lam)`` to ``ind(sigma_{Ad*_g0 lam})``.

    Requires ``Ad_{g0}`` to preserve the polarizing subalgebra.
    """
    g0 = np.asarray(g0, dtype=float)
    lam2 = coadjoint(alg, g0, pol.lam)
    pol2 = Polarization(pol.basis, lam2, alg)
    for b in pol.basis:
        moved = bch(alg, bch(alg, -g0, b), g0)
        if not pol.contains(moved):
            raise NotInSubalgebra("g0 does not normalize the polarizing subgroup")
    m = grid.size
    mat = np.zeros((m, m), dtype=complex)
    for i, y in enumerate(grid.nodes):
        y2, k = grid.decompose(bch(alg, grid.section(y), g0))
        mat[i, grid.locate(y2)] = np.exp(-2j * np.pi * (pol.lam @ k))
    return mat, pol2


def unitarity_defect(op: np.ndarray) -> float:
    return float(np.max(np.abs(op.conj().T @ op - np.eye(op.shape[0]))))


# -- realization inside L^2(G/N) -------------------------------------------------

def lift_matrix(alg: LieAlgebra, pol: Polarization, gn: Quotient, gh: Quotient) -> np.ndarray:
    """Embedding of induced-representation vectors into functions on ``G/N``.

    A vector ``phi`` on the ``G/H`` grid is the contravariant function ``f``
    with ``f(s_H(x)) = phi(x)``; its image is ``y -> f(s_N(y))``.
    """
    emb = np.zeros((gn.size, gh.size), dtype=complex)
    for i, y in enumerate(gn.nodes):
        x, k = gh.decompose(gn.section(y))
        emb[i, gh.locate(x)] = np.exp(-2j * np.pi * (pol.lam @ k))
    return emb


def translation_operator(gn: Quotient, g) -> np.ndarray:
    """Left-translation matrix ``(T(g) F)(y) = F(g^-1 y)`` on the ``G/N`` grid."""
    idx, _ = gn.left_translation(g)
    mat = np.zeros((gn.size, gn.size))
    mat[np.arange(gn.size), idx] = 1.0
    return mat


def pushforward_weights(gn: Quotient, gh: Quotient) -> np.ndarray:
    """Weights of ``rho_* mu`` on the ``G/H`` grid, ``rho: G/N -> G/H``."""
    out = np.zeros(gh.size)
    for y, w in zip(gn.nodes, gn.weights):
        x, _ = gh.decompose(gn.section(y))
        out[gh.locate(x)] += w
    return out


@dataclass(frozen=True, eq=False)
class Realization:
    polarization: Polarization
    gn: Quotient
    gh: Quotient
    embedding: np.ndarray


def realize(alg: LieAlgebra, n_basis, lam, periods, counts) -> Realization:
    """Set up ``ind(sigma_lam)`` and its embedding into ``L^2(G/N)``.

    The ``G/H`` grid reuses the axes of the ``G/N`` grid that are not absorbed
    by ``H``, so the projection ``G/N -> G/H`` maps nodes onto nodes.
    """
    lam = np.asarray(lam, dtype=float)
    n_basis = np.asarray(n_basis, dtype=float).reshape(-1, alg.dim)
    if n_basis.shape[0] and np.max(np.abs(n_basis @ lam)) > 1e-12:
        raise StabilizerObstruction("lam does not vanish on the stabilizer algebra")
    pol = polarize(alg, lam, require_contains=n_basis if n_basis.shape[0] else None)
    gn = quotient(alg, n_basis, periods, counts)
    h_comp = complement_basis(alg, pol.basis, prefer=gn.complement)
    keep = [next(j for j, c in enumerate(gn.complement) if np.array_equal(c, v)) for v in h_comp]
    gn_counts = np.broadcast_to(np.asarray(counts, dtype=int), (gn.complement.shape[0],))
    gh = quotient(alg, pol.basis, gn.periods[keep], gn_counts[keep], complement=h_comp)
    return Realization(pol, gn, gh, lift_matrix(alg, pol, gn, gh))


def realization_residual(real: Realization, group_samples, translations=None) -> float:
    """Largest defect of the lifted subspace as a subrepresentation of ``L^2(G/N)``.

    For each sampled ``g``: ``max |T(g) E - E pi(g)|`` together with the
    leakage ``|(1 - P) T(g) P|`` of the range projector ``P``.  Translation
    matrices may be passed in when they are shared across realizations.
    """
    alg = real.gn.algebra
    emb = real.embedding
    root = np.sqrt(real.gn.weights)[:, None]
    # orthonormalize the range in the weighted inner product
    q, _ = np.linalg.qr(root * emb)
    samples = np.atleast_2d(group_samples)
    if translations is None:
        translations = [translation_operator(real.gn, g) for g in samples]
    worst = 0.0
    for g, t in zip(samples, translations):
        pi = induced_rep_operator(alg, real.polarization, g, real.gh)
        worst = max(worst, float(np.max(np.abs(t @ emb - emb @ pi))))
        tq = root * (t @ (q / root))
        leak = tq - q @ (q.conj().T @ tq)
        worst = max(worst, float(np.max(np.abs(leak))))
    return worst


def subrep_residual(alg: LieAlgebra, n_basis, lam, periods, counts, group_samples) -> float:
    return realization_residual(realize(alg, n_basis, lam, periods, counts), group_samples)


def realization_overlap(r1: Realization, r2: Realization) -> float:
    """Largest normalized inner product between two lifted subspaces on the same ``G/N`` grid."""
    w = r1.gn.weights
    a = r1.embedding / np.sqrt(np.sum(w[:, None] * np.abs(r1.embedding) ** 2, axis=0))
    b = r2.embedding / np.sqrt(np.sum(w[:, None] * np.abs(r2.embedding) ** 2, axis=0))
    return float(np.max(np.abs(a.conj().T @ (w[:, None] * b))))


def lifted_overlap(alg: LieAlgebra, n_basis, lam1, lam2, periods, counts) -> float:
    return realization_overlap(realize(alg, n_basis, lam1, periods, counts),
                               realize(alg, n_basis, lam2, periods, counts))
