import numpy as np
import pytest

from lognls.grid import make_grid


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=["neumann", "dirichlet", "periodic"])
def any_bc(request):
    return request.param


def random_field(grid, rng, smooth=False):
    from lognls.grid import Field

    vals = rng.standard_normal(grid.n) + 1j * rng.standard_normal(grid.n)
    if smooth:
        vals = np.convolve(vals, np.ones(9) / 9, mode="same")
    if grid.bc.value == "dirichlet":
        vals[0] = vals[-1] = 0
    return Field(grid, vals)


@pytest.fixture
def small_grid():
    return make_grid(16, 6)
