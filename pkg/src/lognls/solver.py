"""Strang splitting for i u_t + Delta u = lam u log|u|^2.

One step is  L(tau/2) o N(tau) o L(tau/2)  with the exact linear flow
L(t) = exp(i t Delta_h) and the exact nonlinear flow
N(t) w = exp(-i lam t phi(w)) w, phi(w) = log|w|^2 (0 at w = 0).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .functionals import DiagnosticsRecord, diagnostics, mass
from .grid import Field
from .spectral import linear_propagator, mode_basis

log = logging.getLogger(__name__)

TINY = np.finfo(float).tiny


def phi_log(w) -> np.ndarray | float:
    """log|w|^2, with 0 where w == 0 or |w|^2 underflows below the smallest normal."""
    w = np.asarray(w)
    a2 = np.abs(w) ** 2
    out = np.zeros(a2.shape)
    pos = a2 >= TINY
    out[pos] = np.log(a2[pos])
    return out if out.ndim else float(out)


def _nonlinear(values: np.ndarray, t: float, lam: float) -> np.ndarray:
    return np.exp(-1j * lam * t * phi_log(values)) * values


def nonlinear_flow(w: Field, t: float, lam: float) -> Field:
    return Field(w.grid, _nonlinear(w.values, t, lam))


def strang_step(u: Field, tau: float, lam: float) -> Field:
    v = linear_propagator(u, tau / 2)
    v = nonlinear_flow(v, tau, lam)
    return linear_propagator(v, tau / 2)


@dataclass(frozen=True)
class SplitConfig:
    lam: float
    T: float
    J: int
    record_every: int | None = None

    def __post_init__(self):
        if self.lam == 0:
            raise ValueError("lambda must be nonzero")
        if int(self.J) != self.J or self.J < 1:
            raise ValueError("J must be a positive integer")
        if self.record_every is not None and self.record_every < 1:
            raise ValueError("record_every must be >= 1")

    @property
    def tau(self) -> float:
        return self.T / self.J

    @property
    def stride(self) -> int:
        return self.record_every or max(1, self.J // 200)


@dataclass
class Trajectory:
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    records: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    aborted: bool = False
    abort_reason: str = ""

    def record_table(self) -> list[DiagnosticsRecord]:
        return self.records

    def state_at(self, t: float) -> Field:
        k = int(np.argmin(np.abs(np.asarray(self.times) - t)))
        return self.states[k]


def _record_steps(J: int, stride: int) -> set:
    steps = set(range(0, J + 1, stride))
    steps.add(J)
    return steps


def run(
    u0: Field,
    cfg: SplitConfig,
    keep_states: bool = True,
    with_diagnostics: bool = True,
    _lam_override: float | None = None,
) -> Trajectory:
    """J Strang steps from u0, recording every ``cfg.stride`` steps plus the last one."""
    lam = cfg.lam if _lam_override is None else _lam_override
    grid = u0.grid
    basis = mode_basis(grid)
    tau = cfg.tau
    half = np.exp(0.5j * tau * basis.eigenvalues)
    record_at = _record_steps(cfg.J, cfg.stride)
    traj = Trajectory()

    def record(j, vals):
        state = Field(grid, vals)
        traj.times.append(j * tau)
        traj.steps.append(j)
        if keep_states:
            traj.states.append(state)
        if with_diagnostics:
            traj.records.append(diagnostics(state, j * tau, cfg.lam))

    vals = np.array(u0.values)
    record(0, vals)
    for j in range(1, cfg.J + 1):
        c = basis.forward(vals)
        c *= half
        vals = _nonlinear(basis.inverse(c), tau, lam)
        c = basis.forward(vals)
        c *= half
        vals = basis.inverse(c)
        if not np.all(np.isfinite(vals)):
            traj.aborted = True
            traj.abort_reason = f"non-finite values at step {j} (t = {j * tau:g})"
            log.error(traj.abort_reason)
            break
        if j in record_at:
            record(j, vals)
    return traj


def final_state(u0: Field, cfg: SplitConfig) -> Field:
    traj = run(u0, cfg, keep_states=True, with_diagnostics=False)
    if traj.aborted:
        raise FloatingPointError(traj.abort_reason)
    return traj.states[-1]


def _run_linear(u0: Field, T: float, J: int) -> Field:
    # lam = 0 is outside logNLS but exercises the harness: both sub-flows commute
    cfg = SplitConfig(lam=1.0, T=T, J=J, record_every=J)
    return run(u0, cfg, keep_states=True, with_diagnostics=False, _lam_override=0.0).states[-1]


@dataclass(frozen=True)
class OrderEstimate:
    order: float
    pairwise: tuple
    errors: tuple
    taus: tuple
    degenerate: bool


def l2_error(u: Field, v: Field) -> float:
    return float(np.sqrt(mass(Field(u.grid, u.values - v.values))))


def observed_order(
    u0: Field,
    lam: float,
    T: float,
    taus,
    reference: Callable[[float], Field] | Field | None = None,
    floor: float = 1e-12,
) -> OrderEstimate:
    """Convergence order of the splitting from runs at the given time steps.

    ``reference`` is the exact state at T (a Field or a callable of t). When
    omitted, a run with the smallest step divided by 8 on the same grid is
    used. ``lam = 0`` runs the linear self-test, where splitting is exact.
    """
    taus = tuple(sorted((float(t) for t in taus), reverse=True))
    Js = [int(round(T / t)) for t in taus]
    if any(abs(J * t - T) > 1e-9 * T for J, t in zip(Js, taus)):
        raise ValueError("every time step must divide T")

    def solve(J):
        if lam == 0:
            return _run_linear(u0, T, J)
        return final_state(u0, SplitConfig(lam, T, J, record_every=J))

    if reference is None:
        ref = solve(8 * Js[-1])
    elif callable(reference):
        ref = reference(T)
    else:
        ref = reference
    errors = tuple(l2_error(solve(J), ref) for J in Js)
    scale = max(float(np.sqrt(mass(u0))), TINY)
    degenerate = min(errors) <= floor * scale
    pair = tuple(
        float(np.log(e1 / e2) / np.log(t1 / t2)) if not degenerate else float("nan")
        for e1, e2, t1, t2 in zip(errors, errors[1:], taus, taus[1:])
    )
    if degenerate or len(taus) < 2:
        order = float("nan")
    else:
        order = float(np.polyfit(np.log(taus), np.log(errors), 1)[0])
    return OrderEstimate(order, pair, errors, taus, degenerate)
