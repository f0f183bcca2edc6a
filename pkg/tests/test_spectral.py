import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings
from hypothesis import strategies as st

from lognls.grid import Field, make_grid, sample
from lognls.spectral import (
    apply_laplacian,
    centered_difference,
    dense_laplacian_matrix,
    linear_propagator,
    mode_basis,
    mode_decompose,
    mode_reconstruct,
    unknowns,
)

from conftest import random_field


def test_eigenvalues_match_dense_oracle(any_bc):
    g = make_grid(3, 5, any_bc)
    L = dense_laplacian_matrix(g, symmetrized=True)
    dense = np.sort(np.linalg.eigvalsh(L))
    ours = np.sort(mode_basis(g).eigenvalues)
    np.testing.assert_allclose(ours, dense, atol=1e-9 * np.abs(dense).max())


def test_stencil_matches_dense_matrix(any_bc, rng):
    g = make_grid(3, 5, any_bc)
    u = random_field(g, rng)
    sl = unknowns(g)
    expected = dense_laplacian_matrix(g) @ u.values[sl]
    np.testing.assert_allclose(apply_laplacian(u).values[sl], expected, rtol=1e-12, atol=1e-9)


def test_roundtrip(any_bc, rng):
    g = make_grid(5, 6, any_bc)
    u = random_field(g, rng)
    b = mode_basis(g)
    back = mode_reconstruct(mode_decompose(u, b), b)
    np.testing.assert_allclose(back.values, u.values, atol=1e-12)


def test_propagator_matches_expm(any_bc, rng):
    g = make_grid(3, 5, any_bc)
    u = random_field(g, rng)
    sl = unknowns(g)
    t = 0.37
    expected = sla.expm(1j * t * dense_laplacian_matrix(g)) @ u.values[sl]
    np.testing.assert_allclose(linear_propagator(u, t).values[sl], expected, atol=1e-11)


def test_propagator_identity_and_group(rng):
    g = make_grid(8, 7)
    u = random_field(g, rng)
    assert linear_propagator(u, 0.0) is u
    a = linear_propagator(linear_propagator(u, 0.2), 0.3).values
    np.testing.assert_allclose(a, linear_propagator(u, 0.5).values, atol=1e-12)


def test_mode_weights_give_trapezoid_norm(any_bc, rng):
    g = make_grid(4, 6, any_bc)
    u = random_field(g, rng)
    b = mode_basis(g)
    c = b.forward(u.values)
    direct = np.sum(g.trapezoid_weights * np.abs(u.values) ** 2)
    assert g.h * np.sum(b.weights * np.abs(c) ** 2) == pytest.approx(direct, rel=1e-12)


def test_laplacian_second_order():
    errs = []
    for K in (6, 7, 8):
        g = make_grid(8, K)
        u = sample(lambda x: np.exp(-(x**2)), g)
        exact = (4 * g.nodes**2 - 2) * np.exp(-g.nodes**2)
        errs.append(np.max(np.abs(apply_laplacian(u).values - exact)))
    assert errs[0] / errs[1] == pytest.approx(4, rel=0.05)
    assert errs[1] / errs[2] == pytest.approx(4, rel=0.05)


def test_centered_difference_closures():
    g = make_grid(4, 5)
    d = centered_difference(sample(np.tanh, g))
    assert d[0] == 0 and d[-1] == 0
    gd = make_grid(4, 5, "dirichlet")
    u = sample(lambda x: np.sin(np.pi * (x + 4) / 8), gd)
    d = centered_difference(u)
    # odd reflection through the zero boundary value
    assert d[0] == pytest.approx(u.values[1] / gd.h)


def test_dense_size_guard():
    with pytest.raises(ValueError, match="dense"):
        dense_laplacian_matrix(make_grid(1, 13))


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=4, max_value=8), st.floats(min_value=-3, max_value=3))
def test_propagator_is_unitary_for_trapezoid_norm(K, t):
    g = make_grid(5, K)
    rng = np.random.default_rng(K)
    u = random_field(g, rng)
    w = g.trapezoid_weights
    before = np.sum(w * np.abs(u.values) ** 2)
    after = np.sum(w * np.abs(linear_propagator(u, t).values) ** 2)
    assert after == pytest.approx(before, rel=1e-12)
