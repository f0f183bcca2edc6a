"""Discrete Laplacian, its exact diagonalisation and the linear Schrodinger group.

The three-point stencil is closed at x = +-a according to the boundary
condition of the grid:

* Neumann: mirror ghost node u(-a-h) := u(-a+h). The resulting operator is
  self-adjoint for the trapezoid-weighted product and diagonalised by DCT-I.
* Dirichlet: endpoint values are zero, the interior operator is diagonalised
  by DST-I.
* Periodic: the last node aliases the first, diagonalised by the FFT.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .grid import BoundaryCondition, Field, Grid

DENSE_MAX_NODES = 4097


@dataclass(frozen=True, eq=False)
class ModeBasis:
    """Eigenbasis of the discrete Laplacian on one grid.

    ``eigenvalues[k]`` is the eigenvalue of mode k. ``weights`` are chosen so
    that the trapezoid-weighted squared norm equals
    ``h * sum(weights * |coeffs|**2)``.
    """

    grid: Grid
    kind: str
    eigenvalues: np.ndarray
    weights: np.ndarray

    @property
    def bc(self) -> BoundaryCondition:
        return self.grid.bc

    def forward(self, values: np.ndarray) -> np.ndarray:
        if self.kind == "cosine-I":
            return sfft.dct(values, type=1)
        if self.kind == "sine-I":
            return sfft.dst(values[1:-1], type=1)
        return sfft.fft(values[:-1])

    def inverse(self, coeffs: np.ndarray) -> np.ndarray:
        if self.kind == "cosine-I":
            return sfft.idct(coeffs, type=1)
        out = np.zeros(self.grid.n, dtype=complex)
        if self.kind == "sine-I":
            out[1:-1] = sfft.idst(coeffs, type=1)
        else:
            out[:-1] = sfft.ifft(coeffs)
            out[-1] = out[0]
        return out


@functools.lru_cache(maxsize=64)
def mode_basis(grid: Grid) -> ModeBasis:
    m = grid.n - 1
    h = grid.h
    if grid.bc is BoundaryCondition.NEUMANN:
        k = np.arange(grid.n)
        lam = -(4.0 / h**2) * np.sin(np.pi * k / (2 * m)) ** 2
        w = np.full(grid.n, 2.0 / (4 * m))
        w[0] = w[-1] = 1.0 / (4 * m)
        kind = "cosine-I"
    elif grid.bc is BoundaryCondition.DIRICHLET:
        k = np.arange(1, m)
        lam = -(4.0 / h**2) * np.sin(np.pi * k / (2 * m)) ** 2
        w = np.full(m - 1, 1.0 / (2 * m))
        kind = "sine-I"
    else:
        k = np.arange(m)
        lam = -(4.0 / h**2) * np.sin(np.pi * k / m) ** 2
        w = np.full(m, 1.0 / m)
        kind = "discrete-Fourier"
    lam.setflags(write=False)
    w.setflags(write=False)
    return ModeBasis(grid, kind, lam, w)


def mode_decompose(u: Field, basis: ModeBasis | None = None) -> np.ndarray:
    basis = basis or mode_basis(u.grid)
    if basis.grid is not u.grid:
        raise ValueError("mode basis was built for a different grid")
    return basis.forward(u.values)


def mode_reconstruct(coeffs: np.ndarray, basis: ModeBasis) -> Field:
    return Field(basis.grid, basis.inverse(np.asarray(coeffs, dtype=complex)))


def apply_laplacian(u: Field) -> Field:
    """Three-point second difference with the grid's boundary closure."""
    g = u.grid
    v = u.values
    out = np.empty_like(v)
    out[1:-1] = v[2:] + v[:-2] - 2.0 * v[1:-1]
    if g.bc is BoundaryCondition.NEUMANN:
        out[0] = 2.0 * (v[1] - v[0])
        out[-1] = 2.0 * (v[-2] - v[-1])
    elif g.bc is BoundaryCondition.DIRICHLET:
        out[1] = v[2] - 2.0 * v[1]
        out[-2] = v[-3] - 2.0 * v[-2]
        out[0] = out[-1] = 0.0
    else:
        out[0] = v[1] + v[-2] - 2.0 * v[0]
        out[-1] = out[0]
    return Field(g, out / g.h**2)


def centered_difference(u: Field) -> np.ndarray:
    """(u(x+h) - u(x-h)) / 2h with ghost nodes consistent with the closure.

    Neumann mirrors the data, so the endpoint values are exactly zero.
    Dirichlet reflects oddly through the zero boundary value.
    """
    g = u.grid
    v = u.values
    d = np.empty_like(v)
    d[1:-1] = v[2:] - v[:-2]
    if g.bc is BoundaryCondition.NEUMANN:
        d[0] = d[-1] = 0.0
    elif g.bc is BoundaryCondition.DIRICHLET:
        d[0] = 2.0 * v[1]
        d[-1] = -2.0 * v[-2]
    else:
        d[0] = v[1] - v[-2]
        d[-1] = d[0]
    return d / (2.0 * g.h)


def linear_propagator(u: Field, t: float) -> Field:
    """exp(i t Delta_h) u, exact in time (diagonal phase per mode)."""
    if t == 0:
        return u
    basis = mode_basis(u.grid)
    c = basis.forward(u.values)
    c *= np.exp(1j * t * basis.eigenvalues)
    return Field(u.grid, basis.inverse(c))


def unknowns(grid: Grid) -> slice:
    """Slice of the nodes that are genuine unknowns for the grid's closure."""
    if grid.bc is BoundaryCondition.DIRICHLET:
        return slice(1, grid.n - 1)
    if grid.bc is BoundaryCondition.PERIODIC:
        return slice(0, grid.n - 1)
    return slice(0, grid.n)


def dense_laplacian_matrix(grid: Grid, symmetrized: bool = False) -> np.ndarray:
    """Dense matrix of Delta_h acting on the unknowns of the grid.

    For Neumann the operator matrix itself is only symmetric for the
    trapezoid weights W; ``symmetrized=True`` returns W^{1/2} L W^{-1/2},
    which is symmetric with the same spectrum. Dirichlet and periodic
    matrices are symmetric either way.
    """
    if grid.n > DENSE_MAX_NODES:
        raise ValueError(f"dense Laplacian limited to {DENSE_MAX_NODES} nodes, grid has {grid.n}")
    sl = unknowns(grid)
    m = len(range(*sl.indices(grid.n)))
    L = np.zeros((m, m))
    idx = np.arange(m)
    L[idx, idx] = -2.0
    L[idx[:-1], idx[:-1] + 1] = 1.0
    L[idx[1:], idx[1:] - 1] = 1.0
    if grid.bc is BoundaryCondition.NEUMANN:
        L[0, 1] = 2.0
        L[-1, -2] = 2.0
        if symmetrized:
            s = np.sqrt(grid.trapezoid_weights / grid.h)
            L = s[:, None] * L / s[None, :]
    elif grid.bc is BoundaryCondition.PERIODIC:
        L[0, -1] += 1.0
        L[-1, 0] += 1.0
    return L / grid.h**2
