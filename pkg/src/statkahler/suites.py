"""Verification suites.  Each suite turns a :class:`RunConfig` into report rows."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .config import RunConfig
from .errors import ConfigError
from .expfam import (
    ExponentialFamily,
    TangentCoord,
    categorical,
    gaussian_location,
    gaussian_location_scale,
    poisson_truncated,
)
from .fisher_geom import dual_flatness_report, duality_residual, fisher_matrix
from .kahler_tm import (
    SplitTangent,
    closedness_residual,
    complex_matrix,
    cotangent_form_residual,
    dom_complex,
    dom_metric,
    dom_symplectic,
    symplectic_matrix,
)
from .l2_embed import pullback_gram, pullback_relative_residuals
from .lie_core import CATALOG, LieAlgebra, bch, coadjoint, from_rational_table, orbit_dimension
from .orbit_method import (
    Quotient,
    character,
    complement_basis,
    induced_rep_operator,
    polarize,
    quotient,
    realization_overlap,
    realization_residual,
    realize,
    translation_operator,
    unitarity_defect,
)
from .sample_space import FiniteCounting, GaussHermite, Product, UniformGrid, build_space, integrate
from .transform_model import (
    GroupAction,
    act_tangent,
    cyclic_action,
    equivariance_residual,
    fundamental_field,
    isometry_residual,
    kahler_preservation_residual,
    line_integral_comoment,
    moment_residual,
    shift_comoment,
    translation_action,
    translation_comoment,
)

CLAIMS = {
    "fisher": "exponential connection flat in natural coordinates; mixture connection flat",
    "fisher.duality": "Z h(X,Y) = h(nabla_Z X, Y) + h(X, nabla*_Z Y)",
    "kahler": "Dombrowski structure on TM is Kaehler",
    "kahler.cotangent": "omega_Dom equals the pulled-back canonical cotangent form",
    "pullback": "embedding pulls Fubini-Study back to a quarter of the Dombrowski structure",
    "pullback.case": "omega-pullback case table: vv = 0, hh = 0, mixed = E[u u~]/4",
    "equivariance": "projectivized embedding is G-equivariant",
    "equivariance.isometry": "G acts by Fisher isometries preserving the Kaehler structure",
    "moment": "d mu*(X) = omega(X#, .) for the translation comoment",
    "moment.stabilizer": "mu*(X) is constant for X in the stabilizer algebra",
    "moment.shift": "shifting by c in the annihilator of [g,g] keeps a moment map",
    "orbits": "coadjoint orbit dimension and polarization dimension",
    "induce": "induced representation is a unitary homomorphism",
    "subrep": "induced representation realized as a subrepresentation of L2(G/N)",
    "subrep.orthogonality": "distinct functionals give mutually orthogonal subspaces",
}


@dataclass(frozen=True)
class Row:
    check: str
    inputs_hash: str
    residual: float
    tolerance: float
    passed: bool
    claim: str


def inputs_hash(*parts) -> str:
    def plain(x):
        if isinstance(x, np.ndarray):
            return [plain(v) for v in x.tolist()]
        if isinstance(x, (list, tuple)):
            return [plain(v) for v in x]
        if isinstance(x, (float, np.floating)):
            return float(x).hex()
        if isinstance(x, (np.integer,)):
            return int(x)
        return x

    blob = json.dumps(plain(list(parts)), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def make_row(cfg: RunConfig, check: str, residual: float, claim: str, *inputs) -> Row:
    tol = cfg.tolerance(check)
    residual = float(residual)
    return Row(check, inputs_hash(check, *inputs), residual, tol, bool(residual <= tol), claim)


# -- building blocks from config ------------------------------------------------------

def _space_from(sect: dict, where: str):
    kind = sect.get("kind")
    try:
        if kind == "gauss_hermite":
            desc = GaussHermite(int(sect.get("order", 60)), float(sect.get("center", 0.0)),
                                float(sect.get("scale", 1.0)))
        elif kind == "grid":
            desc = UniformGrid(float(sect.get("lo", -20.0)), float(sect.get("hi", 20.0)),
                               int(sect.get("count", 2000)), bool(sect.get("periodic", True)))
        elif kind == "finite":
            desc = FiniteCounting(int(sect["n"]))
        else:
            raise ConfigError(f"unknown space kind {kind!r}", field=f"{where}.kind")
    except KeyError as exc:
        raise ConfigError(f"missing space field {exc.args[0]}", field=f"{where}.{exc.args[0]}") from None
    dims = int(sect.get("dims", 1))
    if dims > 1:
        desc = Product(tuple([desc] * dims))
    return build_space(desc)


def build_family(cfg: RunConfig) -> ExponentialFamily:
    sect = cfg.family
    name = sect["name"]
    if name == "categorical":
        return categorical(int(sect.get("n", 3)), float(sect.get("bound", 10.0)))
    if name == "poisson_truncated":
        return poisson_truncated(int(sect.get("kmax", 20)), float(sect.get("bound", 3.0)))
    space = _space_from(sect.get("space", {"kind": "gauss_hermite", "order": 60}), "family.space")
    if name == "gaussian_location":
        return gaussian_location(space, float(sect.get("bound", 5.0)))
    return gaussian_location_scale(space, float(sect.get("bound", 5.0)))


def build_action(cfg: RunConfig, fam: ExponentialFamily) -> GroupAction:
    sect = cfg.group
    kind = sect.get("action")
    if kind == "translation":
        if not fam.name.startswith("gaussian_location") or fam.name == "gaussian_location_scale":
            raise ConfigError("translation action needs the gaussian_location family", field="group.action")
        return translation_action(fam.space.dim, sect.get("acting_dim"))
    if kind == "cyclic":
        if not fam.name.startswith("categorical"):
            raise ConfigError("cyclic action needs the categorical family", field="group.action")
        return cyclic_action(fam.space.size)
    raise ConfigError("suite needs [group] with action = translation or cyclic", field="group.action")


def build_algebra(sect: dict) -> LieAlgebra:
    name = sect.get("algebra", "heisenberg")
    if name == "custom":
        rows = sect.get("table", [])
        table: dict = {}
        for entry in rows:
            i, j, k, num, den = entry
            table.setdefault((int(i), int(j)), {})[int(k)] = (int(num), int(den))
        return from_rational_table(int(sect["dim"]), table, name="custom")
    if name == "filiform4":
        return CATALOG[name]()
    return CATALOG[name](int(sect.get("dim", 3 if name == "heisenberg" else 1)))


def sample_point(fam: ExponentialFamily, rng: np.random.Generator) -> TangentCoord:
    """Draw ``theta`` from the middle of the parameter box and ``v`` standard normal."""
    u = rng.random(fam.n)
    theta = fam.lower + (fam.upper - fam.lower) * (0.3 + 0.4 * u)
    return TangentCoord(theta, rng.standard_normal(fam.n))


def random_split(tc: TangentCoord, rng) -> SplitTangent:
    n = tc.base.shape[0]
    return SplitTangent(tc, rng.standard_normal(n), rng.standard_normal(n))


def group_elements(cfg: RunConfig, action: GroupAction, fam: ExponentialFamily, rng) -> np.ndarray:
    """Configured elements, else grid-aligned samples (integers for finite groups)."""
    if "elements" in cfg.group:
        return np.atleast_2d(np.asarray(cfg.group["elements"], dtype=float))
    count = int(cfg.group.get("element_count", 10))
    if action.discrete:
        return rng.integers(0, fam.space.size, size=(count, action.algebra.dim)).astype(float)
    desc = fam.space.descriptor
    axes = list(desc.factors) if isinstance(desc, Product) else [desc]
    if not all(isinstance(a, UniformGrid) and a.periodic for a in axes):
        raise ConfigError("translation checks need a periodic grid space", field="family.space.kind")
    spacing = np.array([(a.hi - a.lo) / a.count for a in axes])
    # keep theta + g inside the parameter box: sampled theta uses its middle 40%
    half_width = 0.3 * (fam.upper - fam.lower)[: len(axes)] / 2
    reach = np.floor(half_width / spacing).astype(np.int64)
    out = np.zeros((count, action.algebra.dim))
    out[:, : len(axes)] = rng.integers(-reach, reach + 1, size=(count, len(axes))) * spacing
    # directions beyond the sample dimension act trivially; any real value is grid-aligned
    out[:, len(axes):] = rng.standard_normal((count, action.algebra.dim - len(axes)))
    return out


# -- suites ---------------------------------------------------------------------------

def suite_fisher(cfg: RunConfig, rng) -> list[Row]:
    fam = build_family(cfg)
    rows = []
    for _ in range(cfg.points):
        tc = sample_point(fam, rng)
        rep = dual_flatness_report(fam, tc.base)
        rows.append(make_row(cfg, "fisher.exp_symbols", rep.exp_flat_residual, CLAIMS["fisher"], fam.name, tc.base))
        rows.append(make_row(cfg, "fisher.mix_curvature", rep.mix_curvature_residual, CLAIMS["fisher"], fam.name, tc.base))
        for _ in range(4):
            x, y, z = rng.standard_normal((3, fam.n))
            res = duality_residual(fam, tc.base, x, y, z)
            rows.append(make_row(cfg, "fisher.duality", res, CLAIMS["fisher.duality"], fam.name, tc.base, x, y, z))
    return rows


def suite_kahler(cfg: RunConfig, rng) -> list[Row]:
    fam = build_family(cfg)
    n = fam.n
    rows = []
    jm = complex_matrix(n)
    for _ in range(cfg.points):
        tc = sample_point(fam, rng)
        key = (fam.name, tc.base, tc.coeffs)
        rows.append(make_row(cfg, "kahler.j_squared", np.max(np.abs(jm @ jm + np.eye(2 * n))), CLAIMS["kahler"], *key))
        w, w2 = random_split(tc, rng), random_split(tc, rng)
        compat = abs(dom_symplectic(fam, w, w2) - dom_metric(fam, dom_complex(w), w2))
        rows.append(make_row(cfg, "kahler.compatibility", compat, CLAIMS["kahler"], *key, w.stacked, w2.stacked))
        det_h = np.linalg.det(fisher_matrix(fam, tc.base).entries)
        det_rel = abs(np.linalg.det(symplectic_matrix(fam, tc.base)) - det_h**2) / det_h**2
        rows.append(make_row(cfg, "kahler.det_rel", det_rel, CLAIMS["kahler"], *key))
        rows.append(make_row(cfg, "kahler.closedness", closedness_residual(fam, tc.base), CLAIMS["kahler"], *key))
        rows.append(make_row(cfg, "kahler.cotangent", cotangent_form_residual(fam, tc.base, tc.coeffs),
                             CLAIMS["kahler.cotangent"], *key))
    return rows


def pullback_case_residuals(fam: ExponentialFamily, tc: TangentCoord) -> tuple[float, float, float]:
    """Imaginary blocks of the pullback Gram matrix against ``0``, ``0`` and ``E[s_i s_j]/4``."""
    n = fam.n
    im = pullback_gram(fam, tc).imag
    s = fam.score(tc.base)
    p = fam.density(tc.base)
    expected = np.array([[integrate(fam.space, s[i] * s[j] * p) for j in range(n)] for i in range(n)]) / 4
    return (float(np.max(np.abs(im[n:, n:]))), float(np.max(np.abs(im[:n, :n]))),
            float(np.max(np.abs(im[:n, n:] - expected))))


def suite_pullback(cfg: RunConfig, rng) -> list[Row]:
    fam = build_family(cfg)
    rows = []
    for _ in range(cfg.points):
        tc = sample_point(fam, rng)
        key = (fam.name, tc.base, tc.coeffs)
        g_rel, om_rel = pullback_relative_residuals(fam, tc)
        rows.append(make_row(cfg, "pullback.g_rel", g_rel, CLAIMS["pullback"], *key))
        rows.append(make_row(cfg, "pullback.omega_rel", om_rel, CLAIMS["pullback"], *key))
        vv, hh, mixed = pullback_case_residuals(fam, tc)
        rows.append(make_row(cfg, "pullback.case_vv", vv, CLAIMS["pullback.case"], *key))
        rows.append(make_row(cfg, "pullback.case_hh", hh, CLAIMS["pullback.case"], *key))
        rows.append(make_row(cfg, "pullback.case_mixed", mixed, CLAIMS["pullback.case"], *key))
    return rows


def suite_equivariance(cfg: RunConfig, rng) -> list[Row]:
    fam = build_family(cfg)
    action = build_action(cfg, fam)
    rows = []
    elements = group_elements(cfg, action, fam, rng)
    for g in elements:
        for _ in range(max(1, cfg.points // 2)):
            tc = sample_point(fam, rng)
            key = (fam.name, action.name, g, tc.base, tc.coeffs)
            rows.append(make_row(cfg, "equivariance.phi", equivariance_residual(action, g, fam, tc),
                                 CLAIMS["equivariance"], *key))
            u, u2 = rng.standard_normal((2, fam.n))
            rows.append(make_row(cfg, "equivariance.isometry", isometry_residual(action, g, fam, tc.base, u, u2),
                                 CLAIMS["equivariance.isometry"], *key, u, u2))
            w, w2 = random_split(tc, rng), random_split(tc, rng)
            kr = kahler_preservation_residual(action, g, fam, tc, w, w2)
            rows.append(make_row(cfg, "equivariance.kahler_g", kr.g_res, CLAIMS["equivariance.isometry"],
                                 *key, w.stacked, w2.stacked))
            rows.append(make_row(cfg, "equivariance.kahler_omega", kr.omega_res, CLAIMS["equivariance.isometry"],
                                 *key, w.stacked, w2.stacked))
    return rows


def suite_moment(cfg: RunConfig, rng) -> list[Row]:
    fam = build_family(cfg)
    if fam.name != "gaussian_location":
        raise ConfigError("moment suite runs on the gaussian_location family", field="family.name")
    sect = dict(cfg.group) or {"action": "translation"}
    action = translation_action(fam.space.dim, sect.get("acting_dim"))
    alg = action.algebra
    closed = translation_comoment(action)
    origin = np.zeros(fam.n)
    brute = line_integral_comoment(action, fam, origin)
    c = rng.standard_normal(alg.dim)
    shifted = shift_comoment(closed, c, alg)
    rows = []
    for _ in range(cfg.points):
        tc = sample_point(fam, rng)
        x = rng.standard_normal(alg.dim)
        probe = random_split(tc, rng)
        key = (fam.name, action.name, tc.base, tc.coeffs, x, probe.stacked)
        res = moment_residual(action, fam, closed, x, tc, probe)
        rows.append(make_row(cfg, "moment.translation", res, CLAIMS["moment"], *key))
        gap = abs(closed(x, tc.base, tc.coeffs) - brute(x, tc.base, tc.coeffs))
        rows.append(make_row(cfg, "moment.line_integral", gap, CLAIMS["moment"], *key))
        res_shift = moment_residual(action, fam, shifted, x, tc, probe)
        rows.append(make_row(cfg, "moment.shift", abs(res_shift - res), CLAIMS["moment.shift"], *key, c))
        for xn in action.stabilizer_basis:
            rows.append(make_row(cfg, "moment.stabilizer_constant", stabilizer_flow_drift(action, fam, brute, xn, tc, rng),
                                 CLAIMS["moment.stabilizer"], *key, xn))
    return rows


def stabilizer_flow_drift(action: GroupAction, fam: ExponentialFamily, comoment, xn, tc: TangentCoord,
                          rng, steps: int = 8) -> float:
    """Spread of ``mu*(xn)`` along the flow of a random generator, plus ``|X#|`` for ``xn``."""
    y = rng.standard_normal(action.algebra.dim)
    vals = []
    for t in np.linspace(-1.0, 1.0, steps):
        moved = act_tangent(action, t * y, fam, tc)
        vals.append(comoment(xn, moved.base, moved.coeffs))
    field = fundamental_field(action, xn, fam, tc)
    return max(float(np.ptp(vals)), float(np.max(np.abs(field.stacked))))


def _orbit_lambdas(cfg: RunConfig, alg: LieAlgebra, rng) -> np.ndarray:
    if "lambdas" in cfg.lie:
        return np.atleast_2d(np.asarray(cfg.lie["lambdas"], dtype=float))
    sweep = int(cfg.lie.get("sweep", 20))
    lams = rng.standard_normal((sweep, alg.dim))
    if alg.name.startswith("heisenberg"):
        lams[::4, -1] = 0.0
    return lams


def expected_orbit_dim(alg: LieAlgebra, lam) -> int | None:
    if alg.name.startswith("heisenberg"):
        return alg.dim - 1 if lam[-1] != 0 else 0
    if alg.name.startswith("abelian"):
        return 0
    return None


def suite_orbits(cfg: RunConfig, rng) -> list[Row]:
    alg = build_algebra(cfg.lie or {"algebra": "heisenberg"})
    rows = []
    for lam in _orbit_lambdas(cfg, alg, rng):
        key = (alg.name, lam)
        dim = orbit_dimension(alg, lam)
        expected = expected_orbit_dim(alg, lam)
        moved = [coadjoint(alg, g, lam) for g in rng.uniform(-2, 2, size=(8, alg.dim))]
        drift = max(abs(orbit_dimension(alg, m) - dim) for m in moved)
        res = drift if expected is None else max(drift, abs(dim - expected))
        rows.append(make_row(cfg, "orbits.dimension", res, CLAIMS["orbits"], *key))
        pol = polarize(alg, lam)
        rows.append(make_row(cfg, "orbits.polarization_dim", abs(pol.dim - (alg.dim - dim / 2)), CLAIMS["orbits"], *key))
        worst = max(pol.subalgebra_defect(), pol.isotropy_defect())
        for _ in range(4):
            a, b = rng.standard_normal((2, pol.dim)) @ pol.basis
            worst = max(worst, abs(character(pol, bch(alg, a, b)) - character(pol, a) * character(pol, b)))
        rows.append(make_row(cfg, "orbits.sigma_hom", worst, CLAIMS["orbits"], *key))
    return rows


def aligned_elements(alg: LieAlgebra, grid: Quotient, count: int, rng) -> np.ndarray:
    """Elements whose action and cocycle are compatible with the periodic grid.

    Complement coordinates are multiples of the grid spacing, subgroup
    coordinates are integers, except along central directions where any real
    value works.
    """
    central = np.all(alg.structure == 0, axis=(1, 2))
    r = grid.complement.shape[0]
    if r:
        counts = np.array([len(np.unique(grid.nodes[:, j])) for j in range(r)])
        spacing = grid.periods / counts
    out = np.zeros((count, alg.dim))
    for i in range(count):
        for b in grid.sub:
            coeff = rng.standard_normal() if np.all(b[~central] == 0) else float(rng.integers(-4, 5))
            out[i] += coeff * b
        if r:
            out[i] += (rng.integers(-(counts // 8), counts // 8 + 1) * spacing) @ grid.complement
    return out


def suite_induce(cfg: RunConfig, rng) -> list[Row]:
    alg = build_algebra(cfg.lie or {"algebra": "heisenberg"})
    sect = cfg.induce
    lam = np.asarray(sect.get("lam", [0.0] * (alg.dim - 1) + [1.0]), dtype=float)
    pol = polarize(alg, lam)
    grid = quotient(alg, pol.basis, sect.get("period", 16.0), sect.get("count", 256),
                    complement=complement_basis(alg, pol.basis))
    pairs = int(sect.get("pairs", 20))
    elems = aligned_elements(alg, grid, 2 * pairs, rng)
    rows = []
    for g, h in zip(elems[0::2], elems[1::2]):
        key = (alg.name, lam, g, h, grid.size)
        a = induced_rep_operator(alg, pol, g, grid)
        b = induced_rep_operator(alg, pol, h, grid)
        ab = induced_rep_operator(alg, pol, bch(alg, g, h), grid)
        rows.append(make_row(cfg, "induce.unitarity", unitarity_defect(a), CLAIMS["induce"], *key))
        rows.append(make_row(cfg, "induce.homomorphism", np.max(np.abs(a @ b - ab)), CLAIMS["induce"], *key))
    return rows


def induced_operators(cfg: RunConfig, rng) -> list[tuple[np.ndarray, np.ndarray]]:
    """The ``(g, pi(g))`` pairs the induce suite samples first, for export."""
    alg = build_algebra(cfg.lie or {"algebra": "heisenberg"})
    sect = cfg.induce
    lam = np.asarray(sect.get("lam", [0.0] * (alg.dim - 1) + [1.0]), dtype=float)
    pol = polarize(alg, lam)
    grid = quotient(alg, pol.basis, sect.get("period", 16.0), sect.get("count", 256),
                    complement=complement_basis(alg, pol.basis))
    elems = aligned_elements(alg, grid, int(sect.get("export", 2)), rng)
    return [(g, induced_rep_operator(alg, pol, g, grid)) for g in elems]


def suite_subrep(cfg: RunConfig, rng) -> list[Row]:
    alg = build_algebra(cfg.lie or {"algebra": "abelian", "dim": 1})
    sect = cfg.subrep
    n_basis = np.asarray(sect.get("stabilizer", []), dtype=float).reshape(-1, alg.dim)
    period, count = sect.get("period", 1.0), sect.get("count", 64)
    lams = np.atleast_2d(np.asarray(sect.get("lams", [[1.0], [2.0]]), dtype=float))
    reals = [realize(alg, n_basis, lam, period, count) for lam in lams]
    gn = reals[0].gn
    samples = aligned_elements(alg, gn, int(sect.get("samples", 4)), rng)
    translations = [translation_operator(gn, g) for g in samples]
    rows = []
    for lam, real in zip(lams, reals):
        res = realization_residual(real, samples, translations)
        rows.append(make_row(cfg, "subrep.residual", res, CLAIMS["subrep"], alg.name, n_basis, lam, samples))
    for a, b in combinations(range(len(lams)), 2):
        ov = realization_overlap(reals[a], reals[b])
        rows.append(make_row(cfg, "subrep.orthogonality", ov, CLAIMS["subrep.orthogonality"],
                             alg.name, n_basis, lams[a], lams[b]))
    return rows


SUITE_RUNNERS = {
    "fisher": suite_fisher,
    "kahler": suite_kahler,
    "pullback": suite_pullback,
    "equivariance": suite_equivariance,
    "moment": suite_moment,
    "orbits": suite_orbits,
    "induce": suite_induce,
    "subrep": suite_subrep,
}


def run(cfg: RunConfig, suites: list[str] | None = None) -> list[Row]:
    """Run suites in order; each suite draws from its own stream seeded by ``(seed, suite)``."""
    names = cfg.checks if suites is None else suites
    rows: list[Row] = []
    for name in names:
        rng = np.random.default_rng([cfg.seed, sorted(SUITE_RUNNERS).index(name)])
        rows.extend(SUITE_RUNNERS[name](cfg, rng))
    return rows
