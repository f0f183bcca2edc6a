import numpy as np
import pytest

from lognls.grid import BoundaryCondition, Field, make_grid, odd_defect, sample


def test_node_layout_and_spacing():
    g = make_grid(16, 8)
    assert g.n == 257
    assert g.h == 2**-3
    assert g.nodes[g.center] == 0.0
    assert g.nodes[0] == -16 and g.nodes[-1] == 16
    np.testing.assert_array_equal(g.nodes, -g.nodes[::-1])


def test_bc_parsing():
    assert make_grid(1, 4, "Dirichlet").bc is BoundaryCondition.DIRICHLET
    with pytest.raises(ValueError, match="boundary"):
        make_grid(1, 4, "robin")


@pytest.mark.parametrize("a,K", [(16, 2), (16, 21), (0, 5), (-1, 5), (np.inf, 5), (16, 5.0)])
def test_guards(a, K):
    with pytest.raises(ValueError):
        make_grid(a, K)


def test_weights():
    g = make_grid(16, 5)
    assert g.trapezoid_weights.sum() == pytest.approx(32)
    assert g.plain_weights.sum() == pytest.approx(32 + g.h)
    p = make_grid(16, 5, "periodic")
    assert p.trapezoid_weights.sum() == pytest.approx(32)
    assert p.plain_weights.sum() == pytest.approx(32)


def test_field_is_immutable_and_checked():
    g = make_grid(4, 4)
    u = Field(g, 1.0)
    with pytest.raises(ValueError):
        u.values[0] = 2
    with pytest.raises(AttributeError):
        u.values = None
    with pytest.raises(ValueError):
        Field(g, np.ones(3))
    with pytest.raises(FloatingPointError):
        Field(g, np.full(g.n, np.nan))


def test_periodic_alias_enforced():
    g = make_grid(4, 4, "periodic")
    u = Field(g, np.arange(g.n, dtype=float))
    assert u.values[-1] == u.values[0]


def test_sample_rejects_non_finite():
    g = make_grid(4, 4)
    with pytest.raises(ValueError, match="not finite"):
        sample(lambda x: 1 / x, g)


def test_odd_defect():
    g = make_grid(16, 7)
    assert odd_defect(sample(np.tanh, g)) == 0.0
    assert odd_defect(sample(np.cosh, g)) > 1
