"""Observables of discrete logNLS states.

Mass, energy, discrete Sobolev norms, the averaging operator
V[f](x) = int_0^1 f(sigma x) d sigma, the four nonlinear terms of the
differentiated equation, and the regularity probes near the cancellation
point x = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cutoff import chi_eval, chi_prime, xfrak_eval, xfrak_prime
from .grid import Field, boundary_derivative_defect, odd_defect
from .spectral import centered_difference, mode_basis

TINY = np.finfo(float).tiny
MAX_ORDER = 5


class VanishingAverageError(ArithmeticError):
    """min |V[v]| fell below the floor: the state has left the class D."""


def _abs2(values):
    a2 = np.abs(values) ** 2
    a2[a2 < TINY] = 0.0
    return a2


def xlogx(a2):
    """a2 * log(a2), continuously extended by 0 at a2 = 0."""
    out = np.zeros_like(a2)
    pos = a2 > 0
    out[pos] = a2[pos] * np.log(a2[pos])
    return out


def inner(u: Field, v: Field, weights: str = "plain") -> complex:
    g = u.grid
    w = g.plain_weights if weights == "plain" else g.trapezoid_weights
    return complex(np.sum(w * u.values * np.conj(v.values)))


def mass(u: Field) -> float:
    """h-weighted sum of |u|^2 with half weights at the two endpoints.

    These are the weights for which the Neumann closure is self-adjoint, so
    this is the quantity the linear and nonlinear sub-flows both conserve.
    """
    return float(np.sum(u.grid.trapezoid_weights * _abs2(u.values)))


def _mode_energies(u: Field):
    basis = mode_basis(u.grid)
    c = basis.forward(u.values)
    return -basis.eigenvalues, u.grid.h * basis.weights * np.abs(c) ** 2


def seminorms_squared(u: Field, max_order: int = MAX_ORDER) -> np.ndarray:
    """Squared Hdot^n_h seminorms for n = 0..max_order from one transform."""
    neg_lam, e = _mode_energies(u)
    out = np.empty(max_order + 1)
    out[0] = mass(u)
    p = np.ones_like(neg_lam)
    for n in range(1, max_order + 1):
        p = p * neg_lam
        out[n] = float(np.sum(e * p))
    return out


def hdot_norm(u: Field, n: int) -> float:
    """sqrt(<(-Delta_h)^n u, u>_h), evaluated in mode space so it is never negative.

    n = 0 is the L2_h norm, consistent with ``mass``.
    """
    if not 0 <= n <= MAX_ORDER:
        raise ValueError(f"order must be in 0..{MAX_ORDER}")
    return float(np.sqrt(seminorms_squared(u, n)[n]))


def h_norm(u: Field, N: int) -> float:
    if not 0 <= N <= MAX_ORDER:
        raise ValueError(f"order must be in 0..{MAX_ORDER}")
    return float(np.sqrt(np.sum(seminorms_squared(u, N))))


def energy(u: Field, lam: float) -> float:
    """Kinetic part <-Delta_h u, u>_h plus lam * h sum' |u|^2 log |u|^2 (endpoint half weights)."""
    kinetic = seminorms_squared(u, 1)[1]
    potential = float(np.sum(u.grid.trapezoid_weights * xlogx(_abs2(u.values))))
    return float(kinetic + lam * potential)


# --- averaging operator ---------------------------------------------------


def v_average_values(f: np.ndarray, nodes: np.ndarray, h: float) -> np.ndarray:
    """Cumulative trapezoid from the centre node outwards, divided by x.

    The centre value is split off first (V[1] = 1), so constants are
    reproduced exactly rather than up to summation rounding.
    """
    f = np.asarray(f)
    c = (len(f) - 1) // 2
    f0 = f[c]
    g = f - f0
    out = np.empty(f.shape, dtype=np.result_type(f, float))
    out[c] = f0
    right = np.cumsum(0.5 * h * (g[c:-1] + g[c + 1 :]))
    out[c + 1 :] = f0 + right / nodes[c + 1 :]
    left = np.cumsum(0.5 * h * (g[c:0:-1] + g[c - 1 :: -1]))
    out[c - 1 :: -1] = f0 - left / nodes[c - 1 :: -1]
    return out


def v_average(f: Field) -> Field:
    g = f.grid
    return Field(g, v_average_values(f.values, g.nodes, g.h))


def interior_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """Centered differences on interior nodes only (length n - 2)."""
    return (values[2:] - values[:-2]) / (2.0 * h)


# --- nonlinear terms of the differentiated equation -----------------------


def _checked_average(v: np.ndarray, nodes, h, floor_rel):
    V = v_average_values(v, nodes, h)
    absV = np.abs(V)
    floor = floor_rel * max(float(np.max(np.abs(v))), TINY)
    if np.min(absV) <= floor:
        j = int(np.argmin(absV))
        raise VanishingAverageError(
            f"min |V[v]| = {absV[j]:.3e} at x = {nodes[j]:.4g} is below the floor {floor:.3e}"
        )
    return V


def vj_terms_values(v: np.ndarray, nodes: np.ndarray, h: float, lam: float, floor_rel: float = 1e-12):
    V = _checked_average(v, nodes, h, floor_rel)
    xf = xfrak_eval(nodes)
    xfp = xfrak_prime(nodes)
    absV2 = np.abs(V) ** 2
    V1 = 2 * lam * V * (chi_prime(nodes) / xf - 1.0 - nodes * xfp / xf)
    V2 = lam * v * np.log(absV2)
    V3 = 2 * lam * V * np.real(v * np.conj(V)) / absV2
    V4 = -2 * lam * v * np.log(xf)
    return V1, V2, V3, V4


def vj_terms(v: Field, lam: float, floor_rel: float = 1e-12) -> tuple[Field, Field, Field, Field]:
    """V1..V4 evaluated nodewise; raises VanishingAverageError when V[v] vanishes."""
    g = v.grid
    return tuple(Field(g, t) for t in vj_terms_values(v.values, g.nodes, g.h, lam, floor_rel))


def log_chi2(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(chi_eval(x)) ** 2)


def decomposition_residual(u: Field, lam: float, x_min: float = 0.5) -> float:
    """max over interior nodes with |x| >= x_min of
    |D_h(lam u log|u|^2) - (lam log|chi|^2 v + V1 + V2 + V3 + V4)|, v = D_h u.

    The exclusion radius is a fixed length: the centered difference of the
    x log|x| part of the nonlinearity has an error of order h^2 / x^2, which
    does not shrink on windows reaching down to a fixed multiple of h.
    """
    g = u.grid
    v = centered_difference(u)
    F = lam * u.values * np.where(_abs2(u.values) > 0, np.log(np.maximum(_abs2(u.values), TINY)), 0.0)
    dF = centered_difference(Field(g, F))
    terms = vj_terms_values(v, g.nodes, g.h, lam)
    mask = np.abs(g.nodes) >= x_min
    mask[0] = mask[-1] = False
    if not np.any(mask):
        raise ValueError("no interior nodes outside the exclusion radius")
    rhs = lam * log_chi2(g.nodes[mask]) * v[mask] + sum(t[mask] for t in terms)
    return float(np.max(np.abs(dF[mask] - rhs)))


# --- membership in D and regularity probes --------------------------------


@dataclass(frozen=True)
class MembershipReport:
    is_odd_defect: float
    min_offcenter_abs: float
    center_slope: complex
    min_abs_V: float


def membership_D(u: Field) -> MembershipReport:
    g = u.grid
    c = g.center
    absu = np.abs(u.values)
    off = np.delete(absu, c)
    v = centered_difference(u)
    return MembershipReport(
        is_odd_defect=odd_defect(u),
        min_offcenter_abs=float(np.min(off)),
        center_slope=complex(v[c]),
        min_abs_V=float(np.min(np.abs(v_average_values(v, g.nodes, g.h)))),
    )


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    mass: float
    energy: float
    hdot: tuple
    hfull: tuple
    min_abs_u: float
    min_abs_V: float
    odd_defect: float
    boundary_defect: float
    endpoint_gap: float


def diagnostics(u: Field, t: float, lam: float) -> DiagnosticsRecord:
    g = u.grid
    sq = seminorms_squared(u)
    hdot = tuple(float(np.sqrt(s)) for s in sq)
    hfull = tuple(float(np.sqrt(s)) for s in np.cumsum(sq))
    kinetic = sq[1]
    e = float(kinetic + lam * np.sum(g.trapezoid_weights * xlogx(_abs2(u.values))))
    v = centered_difference(u)
    # plain-sum minus trapezoid mass
    gap = float(np.sum((g.plain_weights - g.trapezoid_weights) * _abs2(u.values)))
    return DiagnosticsRecord(
        t=float(t),
        mass=float(sq[0]),
        energy=e,
        hdot=hdot,
        hfull=hfull,
        min_abs_u=float(np.min(np.abs(u.values))),
        min_abs_V=float(np.min(np.abs(v_average_values(v, g.nodes, g.h)))),
        odd_defect=odd_defect(u),
        boundary_defect=boundary_derivative_defect(u),
        endpoint_gap=gap,
    )


@dataclass(frozen=True)
class LogSlopeReport:
    t: float
    slope: complex
    zeta_integral: complex
    fit_window: tuple
    fit_residual: float


def log_slope_fit(u: Field, window: tuple[float, float], even_terms: int = 1):
    """Least-squares fit of D_h u on window nodes of both signs.

    Basis: 1, log|x| and ``even_terms`` smooth even monomials x^2, x^4, ...
    D_h u is even for odd u; without the x^2 column the log|x| coefficient of
    smooth data picks up its curvature and no longer reads ~0.
    Returns (log|x| coefficient, rms residual).
    """
    g = u.grid
    lo, hi = window
    r = np.abs(g.nodes)
    mask = (r >= lo) & (r <= hi)
    mask[0] = mask[-1] = False
    if np.count_nonzero(mask) < 8:
        raise ValueError(f"fit window {window} contains fewer than 8 nodes")
    v = centered_difference(u)[mask]
    rm = r[mask]
    cols = [np.ones_like(rm), np.log(rm)] + [rm ** (2 * k) for k in range(1, even_terms + 1)]
    design = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(design, v, rcond=None)
    resid = float(np.linalg.norm(design @ coef - v) / np.sqrt(mask.sum()))
    return complex(coef[1]), resid


def default_probe_window(grid) -> tuple[float, float]:
    return (4 * grid.h, grid.a / 64)


def log_slope_probe(
    traj, t: float, window: tuple[float, float] | None = None, even_terms: int = 1
) -> LogSlopeReport:
    """Fitted log|x| coefficient of D_h u at the recorded time closest to t,
    with the trapezoid estimate of int_0^t zeta, zeta(s) = D_h u(s, 0)."""
    times = np.asarray(traj.times)
    if len(traj.states) != len(times):
        raise ValueError("trajectory does not carry states at every recorded time")
    k = int(np.argmin(np.abs(times - t)))
    u = traj.states[k]
    window = window or default_probe_window(u.grid)
    slope, resid = log_slope_fit(u, window, even_terms)
    c = u.grid.center
    zeta = np.array([centered_difference(s)[c] for s in traj.states[: k + 1]])
    zint = complex(np.trapezoid(zeta, times[: k + 1])) if k > 0 else 0j
    return LogSlopeReport(float(times[k]), slope, zint, tuple(window), resid)
