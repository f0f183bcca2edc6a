import math

import numpy as np
import pytest

from lognls.grid import Field, make_grid
from lognls.spectral import dense_laplacian_matrix
from lognls.toymodel import (
    build_toy_operator,
    choose_kappa,
    equivalence_probe,
    h1_norm,
    random_smooth_dirichlet,
    sup_h1_embedding,
    toy_evolve,
    toy_potential,
    toy_propagator,
    _gram_h1,
)


@pytest.fixture(scope="module")
def grid():
    return make_grid(16, 8, "dirichlet")


@pytest.fixture(scope="module")
def op(grid):
    return build_toy_operator(grid, 1.0, choose_kappa(grid, 1.0))


def test_zero_potential_is_dirichlet_laplacian(grid):
    op0 = build_toy_operator(grid, 0.0, 0.0)
    dense = np.sort(-np.linalg.eigvalsh(dense_laplacian_matrix(grid)))
    np.testing.assert_allclose(op0.eigenvalues, dense, atol=1e-10)


def test_guards():
    with pytest.raises(ValueError, match="Dirichlet"):
        build_toy_operator(make_grid(16, 5), 1.0, 0.0)
    with pytest.raises(ValueError, match="limited"):
        build_toy_operator(make_grid(16, 13, "dirichlet"), 1.0, 0.0)
    with pytest.raises(ValueError):
        choose_kappa(make_grid(16, 5, "dirichlet"), -1.0)


def test_centre_potential_treatment(grid):
    c = grid.center - 1
    mid = toy_potential(grid, 1.0, "midpoint")
    nb = toy_potential(grid, 1.0, "neighbor")
    assert mid[c] == pytest.approx(math.log((grid.h / 2) ** 2))
    assert nb[c] == pytest.approx(math.log(grid.h**2))
    with pytest.raises(ValueError):
        toy_potential(grid, 1.0, "bogus")


def test_symmetry_and_orthonormality(op, grid, rng):
    assert op.symmetry_defect <= 1e-12
    E = op.h_orthonormal_basis()
    np.testing.assert_allclose(grid.h * E.T @ E, np.eye(E.shape[1]), atol=1e-10)
    u, v = random_smooth_dirichlet(grid, rng), random_smooth_dirichlet(grid, rng)
    lhs = grid.h * np.vdot(v.values, op.apply(u).values)
    rhs = grid.h * np.vdot(op.apply(v).values, u.values)
    assert abs(lhs - rhs) <= 1e-11 * abs(lhs)


def test_negative_lambda_needs_no_shift(grid):
    assert build_toy_operator(grid, -1.0, 0.0).eigenvalues[0] >= 0


def test_kappa_is_minimal_on_lattice(grid, op):
    kappa = op.kappa
    assert op.eigenvalues[0] >= -1e-10
    assert build_toy_operator(grid, 1.0, kappa - 0.1).eigenvalues[0] < 0
    assert build_toy_operator(grid, 1.0, kappa - 1e-3).eigenvalues[0] <= 0
    assert kappa == pytest.approx(round(kappa / 1e-3) * 1e-3, abs=1e-12)


def test_kappa_small_lambda(grid):
    assert choose_kappa(grid, 1e-6) == pytest.approx(0, abs=1e-2)


def test_propagator(op, grid, rng):
    v = random_smooth_dirichlet(grid, rng)
    assert toy_propagator(op, v, 0.0) is v
    n0 = np.linalg.norm(v.values)
    assert abs(np.linalg.norm(toy_propagator(op, v, 1.0).values) - n0) <= 1e-10 * n0
    a = toy_propagator(op, toy_propagator(op, v, 0.25), 0.5).values
    np.testing.assert_allclose(a, toy_propagator(op, v, 0.75).values, atol=1e-10)
    shifted = toy_propagator(op, v, 1.0, shifted=True).values
    np.testing.assert_allclose(shifted, np.exp(-1j * op.kappa) * toy_propagator(op, v, 1.0).values, atol=1e-10)


def test_equivalence_probe(op, grid):
    rep = equivalence_probe(op, 32)
    assert 0 < rep.c1_hat <= rep.sample_c1 <= rep.sample_C1 <= rep.C1_hat
    # H2 comparison on holdout samples with the fitted constants
    L = dense_laplacian_matrix(grid)
    rng = np.random.default_rng(99)
    for _ in range(20):
        v = random_smooth_dirichlet(grid, rng)
        x = v.values[1:-1]
        Av = np.linalg.norm(op.matrix @ x)
        Lv = np.linalg.norm(L @ x)
        H1 = math.sqrt(np.real(np.vdot(x, _gram_h1(op) @ x)))
        H2 = math.sqrt(np.real(np.vdot(x, (np.eye(len(x)) - L + L @ L) @ x)))
        assert Lv - rep.c2_hat * H1 <= Av * (1 + 1e-12)
        assert Av <= rep.C2_hat * H2 * (1 + 1e-12)


def test_equivalence_zero_potential(grid):
    rep = equivalence_probe(build_toy_operator(grid, 0.0, 0.0), 16)
    assert 0 < rep.c1_hat and rep.C1_hat <= 1


def test_toy_evolve_eigenvector_is_phase(op, grid):
    e = op.h_orthonormal_basis()[:, 3]
    v0 = Field(grid, np.r_[0, e, 0])
    tr = toy_evolve(op, v0, 1.0, 4)
    mu = op.eigenvalues[3] - op.kappa
    np.testing.assert_allclose(tr.states[-1].values, np.exp(-1j * mu) * v0.values, atol=1e-10)


def test_toy_evolve_bounds(op, grid, rng):
    v0 = random_smooth_dirichlet(grid, rng)
    rep = equivalence_probe(op, 8)
    tr = toy_evolve(op, v0, 10.0, 50)
    m = [r.mass for r in tr.records]
    assert max(abs(x - m[0]) for x in m) <= 1e-10 * m[0]
    bound = math.sqrt(rep.C1_hat / rep.c1_hat) * h1_norm(op, v0)
    assert max(h1_norm(op, s) for s in tr.states) <= bound * (1 + 1e-6)


def test_sup_embedding_is_attained(op, grid):
    C = sup_h1_embedding(op)
    rng = np.random.default_rng(3)
    for _ in range(10):
        v = random_smooth_dirichlet(grid, rng)
        assert np.max(np.abs(v.values)) <= C * h1_norm(op, v) * (1 + 1e-12)
