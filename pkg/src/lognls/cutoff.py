"""Smooth odd cutoff chi and the ratio xfrak = chi / x.

chi is built from its derivative: chi' = 1 on |x| <= 1/2, decays smoothly to
0 over a window of unit width through the C-infinity step
S(s) = psi(s) / (psi(s) + psi(1 - s)), psi(s) = exp(-1/s), and vanishes
beyond. Since S(s) + S(1 - s) = 1, the window integrates to exactly 1/2, so
chi reaches +-1 at |x| = 3/2 and stays there. chi is monotone, |chi| <= 1 and
|chi'| <= 1 hold by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

INNER = 0.5
WIDTH = 1.0
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(96)


def _psi(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0
    out[pos] = np.exp(-1.0 / s[pos])
    return out


def smooth_step(s):
    """C-infinity step: 0 for s <= 0, 1 for s >= 1."""
    s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)
    a, b = _psi(s), _psi(1.0 - s)
    return a / (a + b)


def _step_integral(sigma):
    """int_0^sigma S(s) ds for sigma in [0, 1], Gauss-Legendre on [0, sigma]."""
    sigma = np.asarray(sigma, dtype=float)
    half = 0.5 * sigma[..., None]
    pts = half * (_GL_NODES + 1.0)
    return np.sum(_GL_WEIGHTS * smooth_step(pts), axis=-1) * half[..., 0]


def chi_eval(x):
    """The cutoff chi at x (scalar or array)."""
    x = np.asarray(x, dtype=float)
    r = np.abs(x)
    out = np.where(r >= INNER + WIDTH, 1.0, r)
    mid = (r > INNER) & (r < INNER + WIDTH)
    if np.any(mid):
        sig = (r[mid] - INNER) / WIDTH
        out = np.array(out, dtype=float)
        out[mid] = INNER + WIDTH * (sig - _step_integral(sig))
    return np.sign(x) * out if out.ndim else float(np.sign(x) * out)


def chi_prime(x):
    x = np.asarray(x, dtype=float)
    r = np.abs(x)
    out = 1.0 - smooth_step((r - INNER) / WIDTH)
    return out if out.ndim else float(out)


def xfrak_eval(x):
    """chi(x) / x, continuously extended by 1 at the origin."""
    x = np.asarray(x, dtype=float)
    r = np.abs(x)
    safe = np.where(r > INNER, x, 1.0)
    out = np.where(r > INNER, np.asarray(chi_eval(x)) / safe, 1.0)
    return out if out.ndim else float(out)


def xfrak_prime(x):
    """Derivative of chi / x; zero on |x| <= 1/2 where chi / x == 1."""
    x = np.asarray(x, dtype=float)
    r = np.abs(x)
    safe = np.where(r > INNER, x, 1.0)
    val = (safe * np.asarray(chi_prime(safe)) - np.asarray(chi_eval(safe))) / safe**2
    out = np.where(r > INNER, val, 0.0)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class CutoffSpec:
    inner: float
    width: float
    sup_chi: float
    sup_chi_prime: float
    floor_xfrak: float


def cutoff_spec(a: float, samples: int = 100_001) -> CutoffSpec:
    """Achieved bounds of chi on [-a, a]; the xfrak floor equals chi(a)/a there."""
    x = np.linspace(-a, a, samples)
    return CutoffSpec(
        inner=INNER,
        width=WIDTH,
        sup_chi=float(np.max(np.abs(chi_eval(x)))),
        sup_chi_prime=float(np.max(np.abs(chi_prime(x)))),
        floor_xfrak=float(np.min(xfrak_eval(x))),
    )
