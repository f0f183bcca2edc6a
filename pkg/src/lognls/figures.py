"""Minimal SVG line plots for the scenario outputs.

Three figure kinds:
  A  norm vs t, one panel per order N, one curve per K (sweep_sobolev)
  B  Re u and Im u vs x at the saved times (tanh_evolution)
  C  |u| vs x at the saved times and min|u| vs t (cos_probe)
"""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .harness import CSV_COLUMNS, RunManifest, read_csv, read_profiles

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]
PANEL_W, PANEL_H = 360, 260
MARGIN = 48


class FigureError(ValueError):
    pass


def _ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    return np.linspace(lo, hi, n)


def _label(v):
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.1e}"
    return f"{v:.4g}"


def panel(x0, y0, series, title, xlabel, ylabel, logy=False):
    """SVG group for one panel. series: list of (label, x, y)."""
    xs = np.concatenate([np.asarray(s[1], float) for s in series])
    ys = np.concatenate([np.asarray(s[2], float) for s in series])
    if logy:
        ys = np.log10(np.maximum(ys, 1e-300))
    xlo, xhi = float(xs.min()), float(xs.max())
    ylo, yhi = float(ys.min()), float(ys.max())
    if yhi - ylo < 1e-12 * max(1.0, abs(yhi)):
        ylo, yhi = ylo - 0.5, yhi + 0.5
    if xhi <= xlo:
        xhi = xlo + 1.0
    w, h = PANEL_W - 2 * MARGIN, PANEL_H - 2 * MARGIN

    def X(v):
        return x0 + MARGIN + (v - xlo) / (xhi - xlo) * w

    def Y(v):
        return y0 + MARGIN + h - (v - ylo) / (yhi - ylo) * h

    out = [f'<g font-family="sans-serif" font-size="10">']
    out.append(f'<rect x="{x0 + MARGIN}" y="{y0 + MARGIN}" width="{w}" height="{h}" fill="none" stroke="#333"/>')
    out.append(f'<text x="{x0 + PANEL_W / 2}" y="{y0 + MARGIN - 10}" text-anchor="middle" font-size="12">{escape(title)}</text>')
    out.append(f'<text x="{x0 + PANEL_W / 2}" y="{y0 + PANEL_H - 8}" text-anchor="middle">{escape(xlabel)}</text>')
    ylab = escape(("log10 " if logy else "") + ylabel)
    cy = y0 + PANEL_H / 2
    out.append(f'<text x="{x0 + 10}" y="{cy}" text-anchor="middle" transform="rotate(-90 {x0 + 10} {cy})">{ylab}</text>')
    for v in _ticks(xlo, xhi):
        out.append(f'<text x="{X(v):.1f}" y="{y0 + MARGIN + h + 12}" text-anchor="middle">{_label(v)}</text>')
    for v in _ticks(ylo, yhi):
        out.append(f'<text x="{x0 + MARGIN - 3}" y="{Y(v) + 3:.1f}" text-anchor="end">{_label(v)}</text>')
    for i, (label, sx, sy) in enumerate(series):
        sy = np.asarray(sy, float)
        if logy:
            sy = np.log10(np.maximum(sy, 1e-300))
        pts = " ".join(f"{X(a):.2f},{Y(b):.2f}" for a, b in zip(sx, sy))
        color = PALETTE[i % len(PALETTE)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        ly = y0 + MARGIN + 12 + 12 * i
        out.append(f'<text x="{x0 + MARGIN + w - 4}" y="{ly}" text-anchor="end" fill="{color}">{escape(label)}</text>')
    out.append("</g>")
    return "\n".join(out)


def write_svg(path: Path, panels: list[str], ncols: int, nrows: int) -> Path:
    W, H = ncols * PANEL_W, nrows * PANEL_H
    body = "\n".join(panels)
    path.write_text(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">\n'
        f'<rect width="{W}" height="{H}" fill="white"/>\n{body}\n</svg>\n'
    )
    return path


def _need(cols: dict, names, where):
    missing = [c for c in names if c not in cols]
    if missing:
        raise FigureError(f"{where}: missing columns {missing}")


def figure_sobolev(manifests: list[RunManifest], base: Path, out: Path) -> Path:
    curves = []
    for m in manifests:
        for name in m.outputs:
            if name.endswith(".csv") and "_K" in name and not name.endswith("_profiles.csv"):
                K = int(name.rsplit("_K", 1)[1].split(".")[0])
                curves.append((K, read_csv(base / name), name))
    if not curves:
        raise FigureError("no sweep_sobolev CSV outputs found")
    curves.sort(key=lambda c: c[0])
    panels = []
    for N in range(6):
        col = f"h{N}"
        for _, data, name in curves:
            _need(data, ["t", col], name)
        series = [(f"K={K}", d["t"], d[col]) for K, d, _ in curves]
        vals = np.concatenate([d[col] for _, d, _ in curves])
        logy = vals.min() > 0 and vals.max() / vals.min() > 100
        panels.append(panel((N % 3) * PANEL_W, (N // 3) * PANEL_H, series, f"H^{N}_h norm", "t", col, logy))
    return write_svg(out / "sobolev_norms.svg", panels, 3, 2)


def _profiles_for(m: RunManifest, base: Path):
    names = [n for n in m.outputs if n.endswith("_profiles.csv")]
    if not names:
        raise FigureError(f"{m.tag}: no profile output")
    return read_profiles(base / names[0])


def figure_real_imag(m: RunManifest, base: Path, out: Path) -> Path:
    x, prof = _profiles_for(m, base)
    re = [(f"t={t:g}", x, u.real) for t, u in prof.items()]
    im = [(f"t={t:g}", x, u.imag) for t, u in prof.items()]
    panels = [panel(0, 0, re, "Re u", "x", "Re u"), panel(PANEL_W, 0, im, "Im u", "x", "Im u")]
    return write_svg(out / f"{m.tag}_re_im.svg", panels, 2, 1)


def figure_modulus(m: RunManifest, base: Path, out: Path) -> Path:
    x, prof = _profiles_for(m, base)
    csvs = [n for n in m.outputs if n.endswith(".csv") and not n.endswith("_profiles.csv")]
    data = read_csv(base / csvs[0])
    _need(data, ["t", "min_abs_u"], csvs[0])
    left = panel(0, 0, [(f"t={t:g}", x, np.abs(u)) for t, u in prof.items()], "|u|", "x", "|u|")
    right = panel(PANEL_W, 0, [("min |u|", data["t"], data["min_abs_u"])], "min |u| over the grid", "t", "min |u|")
    return write_svg(out / f"{m.tag}_modulus.svg", [left, right], 2, 1)


def load_manifests(directory) -> list[RunManifest]:
    paths = sorted(Path(directory).glob("*.manifest.json"))
    return [RunManifest.load(p) for p in paths]


def emit_figures(manifests, out_dir=None) -> list[Path]:
    """Write the SVG figures that the given manifests (or a manifest directory) support."""
    if isinstance(manifests, (str, Path)):
        base = Path(manifests)
        manifests = load_manifests(base)
    else:
        manifests = list(manifests)
        base = Path(out_dir or (manifests[0].params.get("out_dir") if manifests else "."))
    out = Path(out_dir or base)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    sob = [m for m in manifests if m.scenario == "sweep_sobolev" and m.outputs]
    if sob:
        written.append(figure_sobolev(sob, base, out))
    for m in manifests:
        if m.scenario == "tanh_evolution" and m.outputs:
            written.append(figure_real_imag(m, base, out))
        elif m.scenario == "cos_probe" and m.outputs:
            written.append(figure_modulus(m, base, out))
    return written


__all__ = ["emit_figures", "load_manifests", "FigureError", "CSV_COLUMNS"]
