"""
tself.render - SVG figures of an MDT laid out in the Poincaré disk
==================================================================

Drawing constants (viewport, colours, strokes) are module-level so figures
stay comparable across runs. Arcs are exact Poincaré geodesics: circular
arcs orthogonal to the boundary, or straight chords when the two endpoints
are aligned with the origin.

Coordinates are written with a fixed number of decimals, so rendering the
same inputs twice gives byte-identical files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from logging import getLogger
from pathlib import Path
from typing import Iterable, Optional
from xml.sax.saxutils import escape

from tself.boosting import Leverage
from tself.errors import ArtifactError, DomainError
from tself.geometry import embed_t_radius, isoline_radius, radius_for_distance
from tself.layout import DiskLayout, apply_t_self
from tself.mdt import MonotonicDecisionTree
from tself.tempered import Temper, is_classical
from tself.utils.load import write_text
from tself.utils.logutils import log_call

log = getLogger("tself")

SIZE = 1000
CENTRE = SIZE / 2
DISK_RADIUS = 480.0
NEGATIVE = "#cc0000"
POSITIVE = "#007700"
NEUTRAL = "#888888"
ISOLINE = "#9999bb"
LEVERAGE = "#1f4fbf"
NODE_RADIUS = 6.0
ARC_STROKE = 1.5
_COLLINEAR = 1e-12


def _f(v: float) -> str:
    return f"{v:.3f}"


class SvgBuilder:
    """Accumulates SVG 1.1 elements; `get_svg` closes the document."""

    def __init__(self, width: int = SIZE, height: int = SIZE):
        self.svg = (
            '<?xml version="1.0" standalone="no"?>\n'
            '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" "http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">\n'
            f'<svg version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" '
            'xmlns="http://www.w3.org/2000/svg">\n'
        )

    def group_start(self, gid: str):
        self.svg += f'<g id="{gid}">\n'

    def group_end(self):
        self.svg += "</g>\n"

    def circle(self, cx: float, cy: float, r: float, stroke: str = "none", fill: str = "none", extra: str = ""):
        self.svg += f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" stroke="{stroke}" fill="{fill}" {extra}/>\n'

    def path(self, d: str, stroke: str, width: float, extra: str = ""):
        self.svg += f'<path d="{d}" stroke="{stroke}" stroke-width="{_f(width)}" fill="none" {extra}/>\n'

    def text(self, x: float, y: float, string: str, extra: str = ""):
        self.svg += f'<text x="{_f(x)}" y="{_f(y)}" {extra}>{escape(string)}</text>\n'

    def get_svg(self) -> str:
        return f"{self.svg}</svg>\n"


def to_screen(z: complex) -> tuple[float, float]:
    return CENTRE + DISK_RADIUS * z.real, CENTRE - DISK_RADIUS * z.imag


def geodesic_path(p: complex, q: complex) -> str:
    """SVG path data of the geodesic segment from p to q."""
    (x1, y1), (x2, y2) = to_screen(p), to_screen(q)
    det = p.real * q.imag - p.imag * q.real
    if abs(det) < _COLLINEAR:
        return f"M {_f(x1)} {_f(y1)} L {_f(x2)} {_f(y2)}"

    # centre c of the circle through p and q orthogonal to the unit circle:
    # Re(conj(c)·p) = (|p|² + 1)/2, same for q
    bp, bq = 0.5 * (abs(p) ** 2 + 1.0), 0.5 * (abs(q) ** 2 + 1.0)
    c = complex((bp * q.imag - bq * p.imag) / det, (bq * p.real - bp * q.real) / det)
    radius = DISK_RADIUS * math.sqrt(abs(c) ** 2 - 1.0)
    cx, cy = to_screen(c)
    cross = (x1 - cx) * (y2 - cy) - (y1 - cy) * (x2 - cx)
    sweep = 1 if cross > 0 else 0
    return f"M {_f(x1)} {_f(y1)} A {_f(radius)} {_f(radius)} 0 0 {sweep} {_f(x2)} {_f(y2)}"


@dataclass
class RenderReport:
    path: Path
    nodes: int
    skipped_isolines: list[float] = field(default_factory=list)


def default_name(stem: str, tree: int, t: Temper) -> str:
    return f"{stem}_tree{tree}_t{t:g}.svg"


@log_call()
def render_svg(
    layout: DiskLayout,
    mdt: MonotonicDecisionTree,
    path,
    isolines: Iterable[float] = (),
    t: Optional[Temper] = None,
    leverage: Optional[Leverage] = None,
) -> RenderReport:
    """
    Draw the disk, posterior isolines, optional leverage circles, the MDT's
    geodesic arcs and its nodes, and a caption with ρ and t. A t different
    from the layout's is applied with apply_t_self first (t=1 layouts only).
    """
    if set(layout.points) != {n.id for n in mdt.nodes}:
        raise ArtifactError(
            f"layout nodes {sorted(layout.points)} do not match MDT nodes {[n.id for n in mdt.nodes]}"
        )
    if t is not None and not math.isclose(t, layout.t, rel_tol=0.0, abs_tol=1e-12):
        if not is_classical(layout.t):
            raise DomainError(f"layout is already at t={layout.t!r}; cannot render it at t={t!r}")
        layout = apply_t_self(layout, t)
    t = layout.t

    svg = SvgBuilder()
    svg.circle(CENTRE, CENTRE, DISK_RADIUS, stroke="#000000", extra='stroke-width="2"')

    skipped = []
    radii = []
    for p in isolines:
        r = isoline_radius(p, t)
        if r == 0.0:
            skipped.append(p)
            log.warning("isoline p=%g has radius 0 and is omitted", p)
        else:
            radii.append((r, p))
    if radii:
        svg.group_start("isolines")
        outer = max(r for r, _ in radii)
        for r, p in sorted(radii):
            width = 2.5 if r == outer else 1.0
            svg.circle(CENTRE, CENTRE, DISK_RADIUS * r, stroke=ISOLINE,
                       extra=f'stroke-width="{width}" stroke-dasharray="6 4" data-p="{p:g}"')
        svg.group_end()

    if leverage is not None:
        svg.group_start("leverage")
        for label, dist in (("kappa", leverage.kappa), ("kappa_star", leverage.kappa_star)):
            r = embed_t_radius(radius_for_distance(dist), t).radius
            svg.circle(CENTRE, CENTRE, DISK_RADIUS * r, stroke=LEVERAGE,
                       extra=f'stroke-width="1.5" data-role="{label}"')
        svg.group_end()

    svg.group_start("arcs")
    for node in mdt.nodes:
        if node.parent is None:
            continue
        d = geodesic_path(layout.points[node.parent].z, layout.points[node.id].z)
        svg.path(d, "#333333", ARC_STROKE * node.width, extra=f'data-width="{node.width}"')
    svg.group_end()

    svg.group_start("nodes")
    for node in mdt.nodes:
        x, y = to_screen(layout.points[node.id].z)
        colour = NEGATIVE if node.prediction < 0 else POSITIVE if node.prediction > 0 else NEUTRAL
        svg.circle(x, y, NODE_RADIUS, fill=colour, extra=f'data-node="{node.id}"')
        svg.text(x + NODE_RADIUS + 2, y - NODE_RADIUS, f"{node.prediction:+.3f}",
                 extra='font-family="sans-serif" font-size="11"')
    svg.group_end()

    svg.text(20, SIZE - 15, f"ρ = {layout.rho:.4f}   t = {t:g}", extra='font-family="sans-serif" font-size="16"')

    out = write_text(path, svg.get_svg())
    log.info("rendered %d nodes to %s", len(mdt), out)
    return RenderReport(out, len(mdt), skipped)


__all__ = ["SvgBuilder", "RenderReport", "geodesic_path", "to_screen", "default_name", "render_svg"]
