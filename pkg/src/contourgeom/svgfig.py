"""Deterministic SVG rendering of projected patches and their contours.

Each figure shows the wireframe image of the parameter grid under the
view map, the traced contour, and markers: one circle per contour cusp
(class "cusp") or a single "degenerate" circle when the whole contour
collapses to a point.  Output is plain text with fixed float formatting,
so identical inputs produce byte-identical files.
"""


import numpy as np

from .contour import contour_line, find_contour_cusps, trace_singular_set
from .projection import build_projection, view_map
from .surface import TangentDirection

GRID_LINES = 33  # wireframe resolution per axis, fixed in v1
CANVAS = 420.0
MARGIN = 20.0


def _fmt(x):
    out = f"{x:.6f}"
    return "0.000000" if out == "-0.000000" else out


def _polyline(points, cls, width, color):
    d = "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in points)
    return f'<path class="{cls}" fill="none" stroke="{color}" stroke-width="{width}" d="{d}"/>'


def wireframe_image(vm, domain, n=GRID_LINES, samples=65):
    """Grid-line images under the view map, as lists of 2D points."""
    u0, u1, v0, v1 = domain
    us = np.linspace(u0, u1, n)
    vs = np.linspace(v0, v1, n)
    su = np.linspace(u0, u1, samples)
    sv = np.linspace(v0, v1, samples)
    lines = []
    for u in us:
        lines.append([vm.g_value((u, v)) for v in sv])
    for v in vs:
        lines.append([vm.g_value((u, v)) for u in su])
    return lines


def render_projection_svg(patch, direction, budget=None, step=None):
    """SVG of the projected wireframe with the contour overlaid."""
    vm = view_map(build_projection(patch, direction))
    lines = wireframe_image(vm, patch.domain)
    if budget is None:
        budget = 0.45 * patch.diameter()

    trace = trace_singular_set(vm, direction.basepoint, budget, step=step)
    pts = contour_line(trace, vm)
    contour_pts = np.array([p.position for p in pts])
    cusps = find_contour_cusps(trace, vm)
    span = contour_pts.max(axis=0) - contour_pts.min(axis=0)
    degenerate = bool(np.linalg.norm(span) < 1e-9 * max(1.0, patch.diameter()))

    allpts = np.concatenate([np.concatenate(lines), contour_pts])
    lo = allpts.min(axis=0)
    hi = allpts.max(axis=0)
    size = np.maximum(hi - lo, 1e-9)
    scale = (CANVAS - 2 * MARGIN) / size.max()

    def to_canvas(p):
        x = MARGIN + (p[0] - lo[0]) * scale
        y = CANVAS - MARGIN - (p[1] - lo[1]) * scale
        return x, y

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_fmt(CANVAS)} {_fmt(CANVAS)}">',
        '<g class="wireframe">',
    ]
    for line in lines:
        parts.append(_polyline([to_canvas(p) for p in line], "grid", 0.4, "#9aa3ab"))
    parts.append("</g>")
    if degenerate:
        x, y = to_canvas(contour_pts.mean(axis=0))
        parts.append(
            f'<circle class="degenerate" cx="{_fmt(x)}" cy="{_fmt(y)}" r="5.0" '
            'fill="#ffffff" stroke="#c0392b" stroke-width="2.0"/>'
        )
    else:
        parts.append(
            _polyline([to_canvas(p) for p in contour_pts], "contour", 2.0, "#1f3b73")
        )
        for c in cusps:
            x, y = to_canvas(c.location)
            parts.append(
                f'<circle class="cusp" cx="{_fmt(x)}" cy="{_fmt(y)}" r="4.0" '
                'fill="#c0392b" stroke="none"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


FIGURE_CATALOG = (
    ("fig1_fplus", "f_plus"),
    ("fig1_fminus", "f_minus"),
    ("fig2_f0", "f0"),
    ("fig2_f1", "f1"),
)


def standard_figures():
    """(name, svg text) for the four catalog projection figures."""
    from .catalog import catalog_surface

    out = []
    for name, surf in FIGURE_CATALOG:
        patch = catalog_surface(surf)
        direction = TangentDirection((0.0, 0.0), (0.0, 1.0))
        out.append((name, render_projection_svg(patch, direction)))
    return out
