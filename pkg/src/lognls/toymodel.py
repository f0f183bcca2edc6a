"""Linear toy model A_kappa = -Delta + lam log|chi|^2 + kappa with Dirichlet conditions.

The operator acts on the interior nodes of a Dirichlet grid. It is assembled
densely and diagonalised once; the evolution group exp(-i t A) is applied in
its eigenbasis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .cutoff import chi_eval
from .functionals import diagnostics
from .grid import BoundaryCondition, Field, Grid
from .solver import Trajectory
from .spectral import dense_laplacian_matrix

TOY_MAX_NODES = 4097
KAPPA_RESOLUTION = 1e-3


def toy_potential(grid: Grid, lam: float, center: str = "midpoint") -> np.ndarray:
    """lam log|chi(x)|^2 on interior nodes.

    log|chi|^2 is -inf at x = 0; that node takes the value at x = h/2
    (``center="midpoint"``) or at x = h (``center="neighbor"``).
    """
    x = grid.nodes[1:-1]
    c = grid.center - 1
    with np.errstate(divide="ignore"):
        pot = np.log(np.asarray(chi_eval(x)) ** 2)
    if center == "midpoint":
        pot[c] = math.log(chi_eval(0.5 * grid.h) ** 2)
    elif center == "neighbor":
        pot[c] = math.log(chi_eval(grid.h) ** 2)
    else:
        raise ValueError(f"unknown centre treatment {center!r}")
    return lam * pot


@dataclass(frozen=True, eq=False)
class ToyOperator:
    grid: Grid
    lam: float
    kappa: float
    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # Euclidean-orthonormal columns on interior nodes

    @property
    def symmetry_defect(self) -> float:
        M = self.matrix
        return float(np.max(np.abs(M - M.T)) / np.max(np.abs(M)))

    def apply(self, v: Field) -> Field:
        out = np.zeros(self.grid.n, dtype=complex)
        out[1:-1] = self.matrix @ v.values[1:-1]
        return Field(self.grid, out)

    def h_orthonormal_basis(self) -> np.ndarray:
        """Eigenvectors normalised in <., .>_h."""
        return self.eigenvectors / math.sqrt(self.grid.h)


def build_toy_operator(grid: Grid, lam: float, kappa: float = 0.0, center: str = "midpoint") -> ToyOperator:
    if grid.bc is not BoundaryCondition.DIRICHLET:
        raise ValueError("the toy operator needs a Dirichlet grid")
    if grid.n > TOY_MAX_NODES:
        raise ValueError(f"toy operator limited to {TOY_MAX_NODES} nodes")
    M = -dense_laplacian_matrix(grid)
    M[np.diag_indices_from(M)] += toy_potential(grid, lam, center) + kappa
    mu, E = np.linalg.eigh(M)
    for arr in (M, mu, E):
        arr.setflags(write=False)
    return ToyOperator(grid, float(lam), float(kappa), M, mu, E)


def choose_kappa(grid: Grid, lam: float, resolution: float = KAPPA_RESOLUTION, center: str = "midpoint") -> float:
    """Smallest kappa on the lattice resolution * N making A_kappa positive definite.

    The spectrum of A_kappa is that of A shifted by kappa, so one eigensolve
    of A settles the lattice search.
    """
    if lam <= 0:
        raise ValueError("choose_kappa is meant for lam > 0; kappa = 0 works for lam < 0")
    mu_min = float(build_toy_operator(grid, lam, 0.0, center).eigenvalues[0])
    if mu_min > 0:
        return 0.0
    steps = math.ceil(-mu_min / resolution)
    if steps * resolution + mu_min <= 0:
        steps += 1
    return round(steps * resolution, 12)


def _coeffs(op: ToyOperator, v: Field) -> np.ndarray:
    return op.eigenvectors.T @ v.values[1:-1]


def _from_coeffs(op: ToyOperator, c: np.ndarray) -> Field:
    out = np.zeros(op.grid.n, dtype=complex)
    out[1:-1] = op.eigenvectors @ c
    return Field(op.grid, out)


def toy_propagator(op: ToyOperator, v: Field, t: float, shifted: bool = False) -> Field:
    """exp(-i t A) v; with ``shifted=True`` the A_kappa group exp(-i t A_kappa) v."""
    if t == 0:
        return v
    mu = op.eigenvalues if shifted else op.eigenvalues - op.kappa
    return _from_coeffs(op, np.exp(-1j * t * mu) * _coeffs(op, v))


# --- norm equivalences ----------------------------------------------------


def _gram_h1(op: ToyOperator) -> np.ndarray:
    # ||v||^2_{H1_h} = h v^T (I - L) v on interior nodes
    L = dense_laplacian_matrix(op.grid)
    return np.eye(L.shape[0]) - L


def _gram_h2(op: ToyOperator) -> np.ndarray:
    L = dense_laplacian_matrix(op.grid)
    return np.eye(L.shape[0]) - L + L @ L


def h1_norm(op: ToyOperator, v: Field) -> float:
    x = v.values[1:-1]
    return math.sqrt(op.grid.h * float(np.real(np.conj(x) @ (_gram_h1(op) @ x))))


def sup_h1_embedding(op: ToyOperator) -> float:
    """Exact max |v_j| / ||v||_{H1_h} over the grid: sqrt(max_j (B^{-1})_jj / h)."""
    Binv = np.linalg.inv(_gram_h1(op))
    return math.sqrt(float(np.max(np.diag(Binv))) / op.grid.h)


@dataclass(frozen=True)
class EquivalenceReport:
    c1_hat: float
    C1_hat: float
    c2_hat: float
    C2_hat: float
    n_samples: int
    sample_c1: float
    sample_C1: float


def random_smooth_dirichlet(grid: Grid, rng: np.random.Generator, modes: int = 24) -> Field:
    """Random complex combination of the first sine modes with decaying weights."""
    k = np.arange(1, modes + 1)
    amp = (rng.standard_normal(modes) + 1j * rng.standard_normal(modes)) / k**2
    x = grid.nodes
    vals = np.sin(np.pi * np.outer(x + grid.a, k) / (2 * grid.a)) @ amp
    vals[0] = vals[-1] = 0.0
    return Field(grid, vals)


def equivalence_probe(op: ToyOperator, n_samples: int = 64, seed: int = 0) -> EquivalenceReport:
    """Extremal ratios of <A_kappa v, v> to ||v||^2_{H1_h} and the H2 comparison constants.

    c1_hat, C1_hat are the extreme generalized eigenvalues of (A_kappa, B1).
    C2_hat = sup ||A_kappa v|| / ||v||_{H2_h}; c2_hat = sup ||(V + kappa) v|| / ||v||_{H1_h},
    which bounds ||Delta v|| - ||A_kappa v|| from above by the triangle inequality.
    The random smooth samples provide an independent check inside [c1_hat, C1_hat].
    """
    A = np.asarray(op.matrix)
    B1 = _gram_h1(op)
    B2 = _gram_h2(op)
    g1 = sla.eigh(A, B1, eigvals_only=True)
    C2sq = sla.eigh(A @ A, B2, eigvals_only=True)[-1]
    pot = np.diag(A) - np.diag(-dense_laplacian_matrix(op.grid))
    c2sq = sla.eigh(np.diag(pot**2), B1, eigvals_only=True)[-1]

    rng = np.random.default_rng(seed)
    ratios = []
    for _ in range(n_samples):
        x = random_smooth_dirichlet(op.grid, rng).values[1:-1]
        ratios.append(float(np.real(np.conj(x) @ A @ x) / np.real(np.conj(x) @ B1 @ x)))
    return EquivalenceReport(
        c1_hat=float(g1[0]),
        C1_hat=float(g1[-1]),
        c2_hat=float(math.sqrt(max(c2sq, 0.0))),
        C2_hat=float(math.sqrt(C2sq)),
        n_samples=n_samples,
        sample_c1=min(ratios) if ratios else float("nan"),
        sample_C1=max(ratios) if ratios else float("nan"),
    )


def toy_evolve(op: ToyOperator, v0: Field, T: float, J: int) -> Trajectory:
    """Exact-in-time evolution under exp(-i t A) at t = j T / J, j = 0..J."""
    c0 = _coeffs(op, v0)
    mu = op.eigenvalues - op.kappa
    traj = Trajectory()
    for j in range(J + 1):
        t = j * T / J
        state = _from_coeffs(op, np.exp(-1j * t * mu) * c0)
        traj.times.append(t)
        traj.steps.append(j)
        traj.states.append(state)
        traj.records.append(diagnostics(state, t, op.lam))
    return traj
