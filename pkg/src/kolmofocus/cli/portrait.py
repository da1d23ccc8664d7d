"""Self-contained SVG phase portraits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from contourpy import contour_generator

from .. import __version__
from ..flow import FlowOptions, IntegrationError, Trajectory, integrate
from ..pwfield import PiecewiseKolmogorovSystem, PolyVectorField, classify_sigma_point, equilibria

SIZE, MARGIN = 640, 48
COLORS = {
    "stable focus": "#1f5fbf",
    "stable node": "#1f5fbf",
    "unstable focus": "#c0392b",
    "unstable node": "#c0392b",
    "saddle": "#e67e22",
    "center candidate": "#27ae60",
    "degenerate": "#7f8c8d",
}
ORBIT_COLORS = ("#34495e", "#8e44ad", "#16a085", "#2c3e50", "#d35400", "#2980b9")


class PortraitError(ValueError):
    """Nothing to draw."""


@dataclass(frozen=True)
class _Frame:
    x0: float
    x1: float
    y0: float
    y1: float

    def px(self, x: float, y: float) -> tuple[float, float]:
        w = SIZE - 2 * MARGIN
        return (
            MARGIN + (x - self.x0) / (self.x1 - self.x0) * w,
            SIZE - MARGIN - (y - self.y0) / (self.y1 - self.y0) * w,
        )

    def inside(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1


def _zones(sys):
    if isinstance(sys, PolyVectorField):
        return [(sys, None)]
    s = float(sys.sigma_x)
    return [(sys.Z1, ("<=", s)), (sys.Z2, (">=", s))]


def _in_zone(region, x: float) -> bool:
    if region is None:
        return True
    op, s = region
    return x <= s + 1e-12 if op == "<=" else x >= s - 1e-12


def default_bbox(sys) -> tuple[float, float, float, float]:
    xs, ys = [1.5], [1.5]
    for fld, region in _zones(sys):
        for eq in equilibria(fld):
            x, y = float(eq.point[0]), float(eq.point[1])
            if x >= 0 and y >= 0 and _in_zone(region, x) and x < 20 and y < 20:
                xs.append(x)
                ys.append(y)
    return (0.0, 1.2 * max(xs), 0.0, 1.2 * max(ys))


def default_seeds(sys, frame: _Frame, focus=None) -> list[tuple[float, float]]:
    seeds = []
    cx = focus if focus is not None else None
    for fld, region in _zones(sys):
        for eq in equilibria(fld):
            x, y = float(eq.point[0]), float(eq.point[1])
            if x > 0 and y > 0 and _in_zone(region, x) and frame.inside(x, y) and eq.tag != "saddle":
                cx = cx or (x, y)
                seeds.append((x + 0.02 * (frame.x1 - frame.x0), y))
    if cx is not None:
        for k in (0.1, 0.2, 0.3):
            seeds.append((float(cx[0]), float(cx[1]) + k * (frame.y1 - frame.y0) / 2))
    for i in (0.25, 0.5, 0.75):
        for j in (0.25, 0.75):
            seeds.append((frame.x0 + i * (frame.x1 - frame.x0), frame.y0 + j * (frame.y1 - frame.y0)))
    return seeds


def _nullclines(fld: PolyVectorField, region, frame: _Frame, n: int = 241):
    xs = np.linspace(frame.x0, frame.x1, n)
    ys = np.linspace(frame.y0, frame.y1, n)
    X, Y = np.meshgrid(xs, ys)
    out = []
    polys = []
    if fld.kolmogorov:
        polys = [(fld.f, "#e74c3c"), (fld.g, "#2980b9")]
    else:
        polys = [(fld.P, "#e74c3c"), (fld.Q, "#2980b9")]
    for p, color in polys:
        Z = np.zeros_like(X)
        for i, j, c in p.float_terms():
            Z += c * X**i * Y**j
        if region is not None:
            mask = ~np.vectorize(lambda x: _in_zone(region, x))(X)
            Z = np.ma.array(Z, mask=mask)
        for line in contour_generator(xs, ys, Z).lines(0.0):
            out.append((line, color))
    return out


def _sliding_segments(sys, frame: _Frame, n: int = 2001):
    if isinstance(sys, PolyVectorField):
        return []
    segs, cur, start = [], None, None
    ys = np.linspace(frame.y0, frame.y1, n)
    for y in ys:
        tag = classify_sigma_point(sys, float(y)).tag
        tag = tag if tag in ("sliding", "escaping") else None
        if tag != cur:
            if cur is not None:
                segs.append((cur, start, float(y)))
            cur, start = tag, float(y)
    if cur is not None:
        segs.append((cur, start, float(ys[-1])))
    return segs


def _polyline(points, frame: _Frame, color: str, width: float = 1.2, dash: str | None = None) -> str:
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in (frame.px(x, y) for x, y in points))
    extra = f' stroke-dasharray="{dash}"' if dash else ""
    return f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="{width}"{extra}/>'


def trajectories_for(sys, seeds, duration: float, frame: _Frame, opts: FlowOptions | None = None) -> list[Trajectory]:
    opts = opts or FlowOptions(int_tol=1e-9, loc_tol=1e-12, max_step=abs(duration) / 400)
    pad = 0.05
    box = (
        frame.x0 - pad * (frame.x1 - frame.x0),
        frame.x1 + pad * (frame.x1 - frame.x0),
        frame.y0 - pad * (frame.y1 - frame.y0),
        frame.y1 + pad * (frame.y1 - frame.y0),
    )
    out = []
    for s in seeds:
        try:
            out.append(integrate(sys, s, duration, opts, box=box))
        except IntegrationError:
            continue
    return [t for t in out if len(t) > 1]


def render_portrait(sys, trajectories: list[Trajectory], bbox, title: str = "") -> str:
    """SVG text with orbits, Σ, nullclines, equilibria and sliding segments."""
    if not trajectories:
        raise PortraitError("no trajectories to draw")
    frame = _Frame(*bbox)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f"<!-- kolmofocus {__version__} -->",
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE - 2 * MARGIN}" height="{SIZE - 2 * MARGIN}" fill="none" stroke="#000000" stroke-width="1"/>',
    ]
    if title:
        parts.append(f'<text x="{SIZE / 2:.0f}" y="{MARGIN / 2 + 6:.0f}" font-family="sans-serif" font-size="14" text-anchor="middle">{title}</text>')
    for v, pos in ((frame.x0, "start"), (frame.x1, "end")):
        parts.append(f'<text x="{frame.px(v, frame.y0)[0]:.2f}" y="{SIZE - MARGIN + 16}" font-family="sans-serif" font-size="11" text-anchor="{pos}">{v:.3g}</text>')
    for v in (frame.y0, frame.y1):
        parts.append(f'<text x="{MARGIN - 4}" y="{frame.px(frame.x0, v)[1]:.2f}" font-family="sans-serif" font-size="11" text-anchor="end">{v:.3g}</text>')
    parts.append('<g id="nullclines" opacity="0.7">')
    for fld, region in _zones(sys):
        for line, color in _nullclines(fld, region, frame):
            parts.append(_polyline(line, frame, color, 1.0, "4 3"))
    parts.append("</g>")
    if isinstance(sys, PiecewiseKolmogorovSystem):
        s = float(sys.sigma_x)
        parts.append('<g id="sigma">' + _polyline([(s, frame.y0), (s, frame.y1)], frame, "#555555", 1.0, "2 2"))
        for kind, a, b in _sliding_segments(sys, frame):
            color = "#27ae60" if kind == "sliding" else "#8e44ad"
            parts.append(_polyline([(s, a), (s, b)], frame, color, 4.0))
        parts.append("</g>")
    parts.append('<g id="orbits">')
    for i, tr in enumerate(trajectories):
        pts = [(x, y) for x, y in zip(tr.x, tr.y)]
        parts.append(_polyline(pts, frame, ORBIT_COLORS[i % len(ORBIT_COLORS)], 1.1))
    parts.append("</g>")
    parts.append('<g id="equilibria">')
    for fld, region in _zones(sys):
        for eq in equilibria(fld):
            x, y = float(eq.point[0]), float(eq.point[1])
            if not (frame.inside(x, y) and _in_zone(region, x)):
                continue
            cx, cy = frame.px(x, y)
            color = COLORS.get(eq.tag, "#7f8c8d")
            parts.append(
                f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="5" fill="{color}" stroke="#000000" stroke-width="0.8">'
                f"<title>{eq.tag} at ({x:.6g}, {y:.6g})</title></circle>"
            )
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
