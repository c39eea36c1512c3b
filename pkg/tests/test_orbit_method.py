import numpy as np
import pytest

from statkahler.errors import ActionLeavesGrid, NotInSubalgebra, PolarizationNotFound, StabilizerObstruction
from statkahler.lie_core import abelian, bch, coadjoint, filiform4, heisenberg, orbit_dimension
from statkahler.orbit_method import (
    Polarization,
    character,
    complement_basis,
    induced_rep_operator,
    intertwiner,
    orbit_of,
    polarize,
    pushforward_weights,
    quotient,
    realization_overlap,
    realization_residual,
    realize,
    subrep_residual,
    translation_operator,
    unitarity_defect,
)
from statkahler.suites import aligned_elements
from statkahler.transform_model import heisenberg_center_action

H3 = heisenberg(3)
X, Y, Z = np.eye(3)


@pytest.fixture(scope="module")
def schroedinger():
    pol = polarize(H3, [0.0, 0.0, 1.0])
    grid = quotient(H3, pol.basis, 4.0, 32, complement=complement_basis(H3, pol.basis))
    return pol, grid


def test_orbit_examples():
    orb = orbit_of(abelian(3), [1.0, -2.0, 0.5], sample_count=16)
    assert orb.dimension == 0
    np.testing.assert_array_equal(orb.samples, np.tile([1.0, -2.0, 0.5], (17, 1)))
    orb = orbit_of(H3, [0.3, -0.2, 1.7], sample_count=32)
    assert orb.dimension == 2
    np.testing.assert_array_equal(orb.samples[0], orb.seed)
    np.testing.assert_allclose(orb.samples[:, 2], 1.7, atol=0)
    assert orbit_of(H3, [0.3, -0.2, 0.0]).dimension == 0


def test_heisenberg_orbit_fills_the_plane():
    # brute-force sampling oracle: x, y coordinates are (b c, -a c) for g = aX + bY
    rng = np.random.default_rng(0)
    c = 1.5
    for _ in range(10):
        a, b = rng.uniform(-3, 3, 2)
        np.testing.assert_allclose(coadjoint(H3, [a, b, 0.0], [0.0, 0.0, c]), [b * c, -a * c, c], atol=1e-15)


def test_filiform_orbits():
    f4 = filiform4()
    assert orbit_of(f4, [0.2, 0.1, -0.5, 1.0]).dimension == 2
    assert orbit_of(f4, [0.2, 0.1, 1.0, 0.0]).dimension == 2
    assert orbit_of(f4, [0.2, 0.1, 0.0, 0.0]).dimension == 0


def _check_polarization(pol, alg, lam):
    assert pol.subalgebra_defect() <= 1e-10
    assert pol.isotropy_defect() <= 1e-12
    assert pol.is_maximal()
    assert pol.dim == alg.dim - orbit_dimension(alg, lam) // 2


def test_polarization_examples():
    pol = polarize(abelian(3), [1.0, 2.0, 3.0])
    assert pol.dim == 3
    lam = [0.0, 0.0, 1.0]
    pol = polarize(H3, lam)
    _check_polarization(pol, H3, lam)
    assert pol.dim == 2 and pol.contains(Z) and (pol.contains(X) != pol.contains(Y))
    assert polarize(H3, [1.0, 0.0, 0.0]).dim == 3
    rng = np.random.default_rng(1)
    f4 = filiform4()
    for alg in (H3, heisenberg(5), f4):
        for _ in range(5):
            lam = rng.standard_normal(alg.dim)
            _check_polarization(polarize(alg, lam), alg, lam)


def test_polarization_contains_required_subalgebra():
    pol = polarize(H3, [0.4, -0.1, 0.0], require_contains=[Z])
    assert pol.contains(Z)
    pol = polarize(H3, [0.0, 0.0, 2.0], require_contains=[X])
    assert pol.contains(X) and pol.contains(Z)
    with pytest.raises(PolarizationNotFound):
        polarize(H3, [0.0, 0.0, 1.0], require_contains=[X, Y])


def test_non_maximal_subalgebra_detected():
    assert not Polarization(np.array([Z]), np.array([0.0, 0.0, 1.0]), H3).is_maximal()


def test_character_examples(schroedinger):
    pol, _ = schroedinger
    assert character(pol, np.zeros(3)) == 1
    assert abs(character(pol, Z) - 1) <= 1e-15
    assert abs(character(pol, 0.5 * Z) + 1) <= 1e-15
    outside = X if not pol.contains(X) else Y
    with pytest.raises(NotInSubalgebra):
        character(pol, outside)
    rng = np.random.default_rng(2)
    for _ in range(10):
        a, b = rng.standard_normal((2, 2)) @ pol.basis
        assert abs(character(pol, bch(H3, a, b)) - character(pol, a) * character(pol, b)) <= 1e-12
    ab = polarize(abelian(2), [0.3, -1.1])
    for _ in range(5):
        a, b = rng.standard_normal((2, 2))
        assert abs(character(ab, a + b) - character(ab, a) * character(ab, b)) <= 1e-14


def test_induced_identity_and_trivial_subgroup():
    alg = abelian(1)
    pol = Polarization(np.zeros((0, 1)), np.zeros(1), alg)
    grid = quotient(alg, np.zeros((0, 1)), 1.0, 8)
    np.testing.assert_array_equal(induced_rep_operator(alg, pol, [0.0], grid), np.eye(8))
    op = induced_rep_operator(alg, pol, [0.25], grid)
    # (pi(g) phi)(y) = phi(y - g): row i picks node i - 2
    np.testing.assert_array_equal(op, np.roll(np.eye(8), -2, axis=1))


def test_schroedinger_operators(schroedinger):
    pol, grid = schroedinger
    np.testing.assert_allclose(induced_rep_operator(H3, pol, np.zeros(3), grid), np.eye(grid.size), atol=0)
    rng = np.random.default_rng(3)
    elems = aligned_elements(H3, grid, 12, rng)
    for g, h in zip(elems[0::2], elems[1::2]):
        a = induced_rep_operator(H3, pol, g, grid)
        b = induced_rep_operator(H3, pol, h, grid)
        assert unitarity_defect(a) <= 1e-12
        assert np.max(np.abs(a @ b - induced_rep_operator(H3, pol, bch(H3, g, h), grid))) <= 1e-10
    # a central element acts by the scalar sigma(exp(-tZ))^-1
    t = 0.37
    np.testing.assert_allclose(induced_rep_operator(H3, pol, t * Z, grid),
                               np.exp(2j * np.pi * t) * np.eye(grid.size), atol=1e-13)


def test_off_grid_elements_rejected(schroedinger):
    pol, grid = schroedinger
    comp = grid.complement[0]
    with pytest.raises(ActionLeavesGrid):
        induced_rep_operator(H3, pol, (4.0 / 64) * comp, grid)
    sub_dir = X if pol.contains(X) else Y
    with pytest.raises(ActionLeavesGrid):
        induced_rep_operator(H3, pol, 0.03 * sub_dir, grid)


def test_intertwiner_between_orbit_points(schroedinger):
    pol, grid = schroedinger
    g0 = (4.0 / 32) * 3 * grid.complement[0]
    mat, pol2 = intertwiner(H3, pol, g0, grid)
    np.testing.assert_allclose(pol2.lam, coadjoint(H3, g0, pol.lam), atol=1e-15)
    assert unitarity_defect(mat) <= 1e-12
    rng = np.random.default_rng(4)
    for g in aligned_elements(H3, grid, 6, rng):
        lhs = mat @ induced_rep_operator(H3, pol, g, grid)
        rhs = induced_rep_operator(H3, pol2, g, grid) @ mat
        assert np.max(np.abs(lhs - rhs)) <= 1e-10


def test_pushforward_measure_identity():
    gn = quotient(H3, [Z], 4.0, 16)
    gh = quotient(H3, [Y, Z], 4.0, 16, complement=[X])
    weights = pushforward_weights(gn, gh)
    f = np.cos(2 * np.pi * gh.nodes[:, 0] / 4.0) + gh.nodes[:, 0] ** 2
    pulled = np.array([f[gh.locate(gh.decompose(gn.section(y))[0])] for y in gn.nodes])
    assert abs(weights @ f - gn.weights @ pulled) <= 1e-13
    assert weights.sum() == pytest.approx(gn.weights.sum(), abs=1e-13)


def test_abelian_subrepresentation():
    alg = abelian(1)
    real = realize(alg, np.zeros((0, 1)), [3.0], 1.0, 64)
    col = real.embedding[:, 0]
    # contravariance makes the lifted function the conjugate character
    np.testing.assert_allclose(col, np.exp(-2j * np.pi * 3.0 * real.gn.nodes[:, 0]), atol=1e-12)
    samples = np.arange(-5, 6)[:, None] / 64
    assert realization_residual(real, samples) <= 1e-12
    other = realize(alg, np.zeros((0, 1)), [5.0], 1.0, 64)
    assert realization_overlap(real, other) <= 1e-12
    assert subrep_residual(alg, np.zeros((0, 1)), [-2.0], 1.0, 64, samples) <= 1e-12


def test_heisenberg_subrepresentation():
    rng = np.random.default_rng(5)
    reals = [realize(H3, [Z], lam, 4.0, 16) for lam in ([1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [1.0, 1.0, 0.0])]
    samples = aligned_elements(H3, reals[0].gn, 4, rng)
    for real in reals:
        assert realization_residual(real, samples) <= 1e-10
    for i in range(3):
        for j in range(i + 1, 3):
            assert realization_overlap(reals[i], reals[j]) <= 1e-12


def test_quotient_translation_matches_direct_action():
    gn = quotient(H3, [Z], 4.0, 16)
    act = heisenberg_center_action()
    rng = np.random.default_rng(6)
    for g in aligned_elements(H3, gn, 5, rng):
        idx = np.argmax(translation_operator(gn, g), axis=1)
        pre = np.mod(act.act_sample(-g, gn.nodes @ gn.complement[:, :2]), 4.0)
        np.testing.assert_allclose(gn.nodes[idx] @ gn.complement[:, :2], pre, atol=1e-12)


def test_stabilizer_obstruction():
    with pytest.raises(StabilizerObstruction):
        realize(H3, [Z], [0.0, 0.0, 1.0], 4.0, 16)
