"""Minimal SVG rendering of pseudospectral contours."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .pseudospec import ContourSet, Region

# a short sequential palette, dark for small eps
_PALETTE = ["#440154", "#3b528b", "#21918c", "#5ec962", "#fde725"]


def _color(t: float) -> str:
    t = min(max(t, 0.0), 1.0)
    x = t * (len(_PALETTE) - 1)
    i = min(int(x), len(_PALETTE) - 2)
    f = x - i
    c0 = [int(_PALETTE[i][k:k + 2], 16) for k in (1, 3, 5)]
    c1 = [int(_PALETTE[i + 1][k:k + 2], 16) for k in (1, 3, 5)]
    return "#" + "".join(f"{round(a + f * (b - a)):02x}" for a, b in zip(c0, c1))


def render(contours: Sequence[ContourSet], eigenvalues, region: Region, size: int = 600,
           title: str = "") -> str:
    """One ``<path>`` per polyline, eigenvalues as dots, legend coloured on a log-eps scale."""
    w = h = size
    legend_w = 140
    sx = w / (region.re_max - region.re_min)
    sy = h / (region.im_max - region.im_min)

    def px(z: complex) -> tuple[float, float]:
        return (z.real - region.re_min) * sx, h - (z.imag - region.im_min) * sy

    logs = [math.log10(c.epsilon) for c in contours]
    lo, hi = (min(logs), max(logs)) if logs else (0.0, 1.0)
    span = hi - lo or 1.0
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w + legend_w}" height="{h}" '
           f'viewBox="0 0 {w + legend_w} {h}">',
           f'<rect x="0" y="0" width="{w}" height="{h}" fill="white" stroke="black"/>']
    if title:
        out.append(f'<title>{title}</title>')
    for cs, lg in zip(contours, logs):
        color = _color((lg - lo) / span)
        for poly, closed in zip(cs.polylines, cs.closed_flags):
            pts = [px(z) for z in poly]
            d = "M " + " L ".join(f"{x:.3f},{y:.3f}" for x, y in pts)
            if closed:
                d += " Z"
            out.append(f'<path d="{d}" fill="none" stroke="{color}" stroke-width="1.2" '
                       f'data-epsilon="{cs.epsilon:.17g}"/>')
    for lam in np.ravel(eigenvalues):
        x, y = px(complex(lam))
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="black"/>')
    for k, (cs, lg) in enumerate(sorted(zip(contours, logs), key=lambda t: t[1])):
        y = 20 + 18 * k
        out.append(f'<line x1="{w + 10}" y1="{y}" x2="{w + 35}" y2="{y}" stroke="{_color((lg - lo) / span)}" '
                   f'stroke-width="3"/>')
        out.append(f'<text x="{w + 42}" y="{y + 4}" font-size="12" font-family="sans-serif">'
                   f'eps = 1e{lg:.2f}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
