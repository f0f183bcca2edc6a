"""Symmetric 1D grids on (-a, a) and the complex fields sampled on them."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

K_MIN = 3
K_MAX = 20


class BoundaryCondition(enum.Enum):
    NEUMANN = "neumann"
    DIRICHLET = "dirichlet"
    PERIODIC = "periodic"

    @classmethod
    def parse(cls, value: "str | BoundaryCondition") -> "BoundaryCondition":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown boundary condition {value!r}") from None


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform grid with ``2**K + 1`` nodes including both endpoints.

    Under periodic conditions the last node aliases the first one, so the grid
    carries ``2**K`` distinct unknowns while keeping the same node layout.
    """

    a: float
    K: int
    bc: BoundaryCondition
    n: int = field(init=False)
    h: float = field(init=False)
    nodes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        m = 2**self.K
        h = 2.0 * self.a / m
        # built from the centre outwards so that x_c = 0 and x_j = -x_{n-1-j} exactly
        half = h * np.arange(m // 2 + 1)
        nodes = np.concatenate([-half[:0:-1], half])
        nodes.setflags(write=False)
        object.__setattr__(self, "n", m + 1)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "nodes", nodes)

    @property
    def center(self) -> int:
        return (self.n - 1) // 2

    @property
    def plain_weights(self) -> np.ndarray:
        """Quadrature weights of the plain-sum product ``h * sum u conj(v)``."""
        w = np.full(self.n, self.h)
        if self.bc is BoundaryCondition.PERIODIC:
            w[-1] = 0.0
        return w

    @property
    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(self.n, self.h)
        if self.bc is BoundaryCondition.PERIODIC:
            w[-1] = 0.0
        else:
            w[0] = w[-1] = 0.5 * self.h
        return w

    def __repr__(self):
        return f"Grid(a={self.a}, K={self.K}, bc={self.bc.value}, n={self.n}, h={self.h})"


def make_grid(a: float, K: int, bc: "BoundaryCondition | str" = BoundaryCondition.NEUMANN) -> Grid:
    if not (isinstance(K, (int, np.integer)) and K_MIN <= K <= K_MAX):
        raise ValueError(f"K must be an integer in [{K_MIN}, {K_MAX}], got {K!r}")
    a = float(a)
    if not (np.isfinite(a) and a > 0):
        raise ValueError(f"half-width a must be positive, got {a!r}")
    return Grid(a, int(K), BoundaryCondition.parse(bc))


class Field:
    """Complex values on the nodes of a grid. Immutable."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid, values):
        vals = np.array(values, dtype=complex)
        if vals.ndim == 0:
            vals = np.full(grid.n, vals, dtype=complex)
        if vals.shape != (grid.n,):
            raise ValueError(f"expected {grid.n} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise FloatingPointError("field contains non-finite values")
        if grid.bc is BoundaryCondition.PERIODIC:
            vals[-1] = vals[0]
        vals.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", vals)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    def with_values(self, values) -> "Field":
        return Field(self.grid, values)

    def __len__(self):
        return self.grid.n

    def __repr__(self):
        return f"Field({self.grid!r}, max|u|={np.max(np.abs(self.values)):.3g})"


def sample(f: Callable[[np.ndarray], np.ndarray], grid: Grid) -> Field:
    """Evaluate ``f`` at every node. ``f`` must accept an array of coordinates."""
    with np.errstate(all="ignore"):
        vals = np.asarray(f(grid.nodes), dtype=complex)
    if vals.ndim == 0:
        vals = np.full(grid.n, vals)
    if not np.all(np.isfinite(vals)):
        bad = grid.nodes[~np.isfinite(vals)]
        raise ValueError(f"sampled function is not finite at x = {bad[:5]}")
    return Field(grid, vals)


def odd_defect(u: Field) -> float:
    """max_j |u(x_j) + u(-x_j)|; zero iff the sampled field is exactly odd."""
    v = u.values
    return float(np.max(np.abs(v + v[::-1])))


def boundary_derivative_defect(u: Field) -> float:
    """One-sided derivative magnitude at the endpoints (Neumann mismatch of the data)."""
    v, h = u.values, u.grid.h
    return float(max(abs(v[1] - v[0]), abs(v[-1] - v[-2])) / h)
