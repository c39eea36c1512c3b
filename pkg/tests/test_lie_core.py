import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm, logm

from statkahler.errors import DimMismatch, InvalidDescriptor, UnsupportedStep
from statkahler.lie_core import (
    abelian,
    adjoint,
    bch,
    bracket,
    coadjoint,
    filiform4,
    from_rational_table,
    heisenberg,
    jacobi_residual,
    lower_central_series,
    orbit_dimension,
)

H3 = heisenberg(3)
F4 = filiform4()


def _h3_matrix(v):
    # faithful 3x3 strictly upper-triangular representation: X=E12, Y=E23, Z=E13
    x, y, z = v
    return np.array([[0.0, x, z], [0.0, 0.0, y], [0.0, 0.0, 0.0]])


def _h3_coords(m):
    return np.array([m[0, 1], m[1, 2], m[0, 2]])


def _f4_matrix(v):
    # e1 acts as the shift, e2..e4 as the last column: [e1, e2] = e3, [e1, e3] = e4
    m = np.zeros((4, 4))
    m[0, 1] = m[1, 2] = v[0]
    m[2, 3], m[1, 3], m[0, 3] = v[1], v[2], v[3]
    return m


def _f4_coords(m):
    return np.array([m[0, 1], m[2, 3], m[1, 3], m[0, 3]])


def test_bracket_examples():
    np.testing.assert_array_equal(bracket(H3, [1, 0, 0], [0, 1, 0]), [0, 0, 1])
    np.testing.assert_array_equal(bracket(H3, [1, 2, 3], [1, 2, 3]), 0)
    np.testing.assert_array_equal(bracket(abelian(4), [1, 2, 3, 4], [4, 3, 2, 1]), 0)


def test_matrix_representations_are_homomorphisms():
    rng = np.random.default_rng(0)
    for alg, rep, coords in ((H3, _h3_matrix, _h3_coords), (F4, _f4_matrix, _f4_coords)):
        for _ in range(5):
            x, y = rng.standard_normal((2, alg.dim))
            comm = rep(x) @ rep(y) - rep(y) @ rep(x)
            np.testing.assert_allclose(coords(comm), bracket(alg, x, y), atol=1e-14)


def test_bch_examples():
    np.testing.assert_array_equal(bch(abelian(3), [1, 2, 3], [0.5, -1, 2]), [1.5, 1, 5])
    a, b = 0.7, -1.3
    np.testing.assert_allclose(bch(H3, [a, 0, 0], [0, b, 0]), [a, b, a * b / 2], atol=1e-15)
    np.testing.assert_array_equal(bch(F4, [0.3, -1.2, 0.5, 2.0], [-0.3, 1.2, -0.5, -2.0]), 0)


@pytest.mark.parametrize("which", ["h3", "f4"])
def test_bch_against_matrix_exponential(which):
    alg, rep, coords = (H3, _h3_matrix, _h3_coords) if which == "h3" else (F4, _f4_matrix, _f4_coords)
    rng = np.random.default_rng(1)
    for _ in range(10):
        x, y = rng.uniform(-2, 2, (2, alg.dim))
        oracle = coords(np.real(logm(expm(rep(x)) @ expm(rep(y)))))
        np.testing.assert_allclose(bch(alg, x, y), oracle, atol=1e-10)


def test_bch_associative():
    rng = np.random.default_rng(2)
    for alg in (H3, F4, heisenberg(5)):
        for _ in range(10):
            x, y, w = rng.uniform(-2, 2, (3, alg.dim))
            np.testing.assert_allclose(bch(alg, bch(alg, x, y), w), bch(alg, x, bch(alg, y, w)), atol=1e-12)


def test_unsupported_and_invalid():
    step5 = from_rational_table(6, {(0, k): {k + 1: 1} for k in range(1, 5)})
    assert step5.nilpotency_step == 5
    with pytest.raises(UnsupportedStep):
        bch(step5, np.ones(6), np.ones(6))
    solvable = from_rational_table(2, {(0, 1): {1: 1}})
    with pytest.raises(UnsupportedStep):
        bch(solvable, [1.0, 0.0], [0.0, 1.0])
    with pytest.raises(InvalidDescriptor):
        # [e0,e1]=e2, [e1,e2]=e0, [e2,e0]=e1 minus one term breaks Jacobi
        from_rational_table(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {0: 1}})


def test_dim_mismatch():
    with pytest.raises(DimMismatch):
        bracket(H3, [1, 0], [0, 1, 0])
    with pytest.raises(DimMismatch):
        coadjoint(H3, [0, 0, 0], [1, 0])


def test_catalog_structure():
    assert lower_central_series(abelian(3)) == [3, 0]
    assert lower_central_series(H3) == [3, 1, 0]
    assert lower_central_series(F4) == [4, 2, 1, 0]
    assert [a.nilpotency_step for a in (abelian(2), H3, F4)] == [1, 2, 3]
    for alg in (H3, F4, heisenberg(7)):
        assert jacobi_residual(alg) == 0


def test_adjoint_against_conjugation():
    rng = np.random.default_rng(3)
    for alg, rep, coords in ((H3, _h3_matrix, _h3_coords), (F4, _f4_matrix, _f4_coords)):
        for _ in range(5):
            g, y = rng.uniform(-2, 2, (2, alg.dim))
            conj = expm(rep(g)) @ rep(y) @ expm(-rep(g))
            np.testing.assert_allclose(adjoint(alg, g) @ y, coords(conj), atol=1e-12)


def test_coadjoint_examples():
    rng = np.random.default_rng(4)
    lam = rng.standard_normal(4)
    np.testing.assert_array_equal(coadjoint(abelian(4), rng.standard_normal(4), lam), lam)
    a, b, c = 0.6, -1.1, 2.0
    # Ad_{exp(-g)} X = X + bZ and Ad_{exp(-g)} Y = Y - aZ
    np.testing.assert_allclose(coadjoint(H3, [a, b, 0.0], [0, 0, c]), [b * c, -a * c, c], atol=1e-15)
    for _ in range(10):
        g = rng.uniform(-3, 3, 3)
        fixed = np.array([rng.standard_normal(), rng.standard_normal(), 0.0])
        np.testing.assert_allclose(coadjoint(H3, g, fixed), fixed, atol=1e-14)


def test_coadjoint_action_law_and_pairing():
    rng = np.random.default_rng(5)
    for alg in (H3, F4):
        for _ in range(10):
            g, h, lam, y = rng.uniform(-2, 2, (4, alg.dim))
            lhs = coadjoint(alg, g, coadjoint(alg, h, lam))
            np.testing.assert_allclose(lhs, coadjoint(alg, bch(alg, g, h), lam), atol=1e-10)
            assert coadjoint(alg, g, lam) @ y == pytest.approx(lam @ adjoint(alg, -g) @ y, abs=1e-12)


def test_orbit_dimension_constant_along_orbit():
    rng = np.random.default_rng(6)
    for alg, lam in ((H3, [0.3, 0.1, 1.5]), (F4, [0.2, -0.4, 0.7, 1.1]), (H3, [1.0, 2.0, 0.0])):
        d0 = orbit_dimension(alg, lam)
        for _ in range(10):
            assert orbit_dimension(alg, coadjoint(alg, rng.uniform(-2, 2, alg.dim), lam)) == d0
    assert orbit_dimension(H3, [0, 0, 1.0]) == 2
    assert orbit_dimension(H3, [1.0, 0, 0]) == 0


_vec4 = st.lists(st.floats(-2, 2), min_size=4, max_size=4)


@settings(max_examples=40, deadline=None)
@given(_vec4, _vec4, _vec4)
def test_adjoint_is_automorphism(g, x, y):
    ad = adjoint(F4, g)
    np.testing.assert_allclose(ad @ bracket(F4, x, y), bracket(F4, ad @ x, ad @ y), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(_vec4)
def test_bch_inverse_exact(x):
    assert not np.any(bch(F4, x, -np.array(x)))
