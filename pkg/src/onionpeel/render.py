"""SVG drawings of point sets, convex layers and tours."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from .geometry import LayerDecomposition, as_points, convex_layers
from .instance import NoGeometryError, TspInstance
from .tour import Tour, detour_flags, find_crossings

PALETTE = ("#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#17becf", "#bcbd22", "#7f7f7f", "#e377c2")


@dataclass(frozen=True)
class RenderSpec:
    width: int = 800
    height: int = 600
    margin: int = 30
    show_layers: bool = True
    show_tour: bool = True
    show_flags: bool = True
    show_crossings: bool = True
    show_labels: bool = False
    flag_count: int = 5
    palette: Sequence[str] = PALETTE
    layer_stroke: float = 1.0
    tour_stroke: float = 2.0
    point_radius: float = 3.0

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("render dimensions must be positive")
        if 2 * self.margin >= min(self.width, self.height):
            raise ValueError("margin leaves no drawing area")


def _f(v: float) -> str:
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _intersection(p1, p2, p3, p4):
    d = (p1.x - p2.x) * (p3.y - p4.y) - (p1.y - p2.y) * (p3.x - p4.x)
    t = ((p1.x - p3.x) * (p3.y - p4.y) - (p1.y - p3.y) * (p3.x - p4.x)) / d
    return p1.x + t * (p2.x - p1.x), p1.y + t * (p2.y - p1.y)


def render_svg(
    inst: TspInstance,
    tour: Optional[Tour] = None,
    spec: RenderSpec = RenderSpec(),
    layers: Optional[LayerDecomposition] = None,
) -> str:
    """Draw the instance: layer polygons, tour edges, red detour-flag circles,
    crossing markers and one glyph per city. Output is deterministic."""
    if not inst.has_geometry:
        raise NoGeometryError(f"instance {inst.name!r} has no coordinates to draw")
    pts = as_points(inst.geometry)
    if layers is None and spec.show_layers and pts:
        layers = convex_layers(pts)

    xs = [p.x for p in pts] or [0.0]
    ys = [p.y for p in pts] or [0.0]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    scale = min(spec.width, spec.height) - 2 * spec.margin
    scale /= span
    x0, y1 = min(xs), max(ys)

    def sx(p):
        return spec.margin + (p.x - x0) * scale

    def sy(p):
        # SVG y grows downward
        return spec.margin + (y1 - p.y) * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{spec.width}" height="{spec.height}" viewBox="0 0 {spec.width} {spec.height}">',
        f"<title>{escape(inst.name)}</title>",
        f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="white"/>',
    ]

    if spec.show_layers and layers is not None:
        out.append('<g id="layers" fill="none">')
        for k, layer in enumerate(layers, start=1):
            color = spec.palette[(k - 1) % len(spec.palette)]
            coords = " ".join(f"{_f(sx(pts[i]))},{_f(sy(pts[i]))}" for i in layer.vertex_ids)
            out.append(
                f'<polygon class="layer" data-layer="{k}" data-kind="{layer.kind.value}" '
                f'points="{coords}" stroke="{color}" stroke-width="{_f(spec.layer_stroke)}" '
                f'stroke-dasharray="4 3"/>'
            )
        out.append("</g>")

    if tour is not None and spec.show_tour:
        out.append(f'<g id="tour" stroke="black" stroke-width="{_f(spec.tour_stroke)}">')
        for a, b in tour.edges():
            pa, pb = pts[a], pts[b]
            out.append(
                f'<line class="tour-edge" x1="{_f(sx(pa))}" y1="{_f(sy(pa))}" '
                f'x2="{_f(sx(pb))}" y2="{_f(sy(pb))}"/>'
            )
        out.append("</g>")

    if tour is not None and spec.show_crossings and len(tour) >= 4:
        crossings = find_crossings(tour)
        if crossings:
            out.append('<g id="crossings" fill="orange" stroke="none">')
            o, m = tour.order, len(tour.order)
            for i, j in crossings:
                x, y = _intersection(pts[o[i]], pts[o[(i + 1) % m]], pts[o[j]], pts[o[(j + 1) % m]])
                px = spec.margin + (x - x0) * scale
                py = spec.margin + (y1 - y) * scale
                out.append(
                    f'<circle class="crossing" data-edges="{i} {j}" cx="{_f(px)}" cy="{_f(py)}" '
                    f'r="{_f(spec.point_radius * 1.5)}"/>'
                )
            out.append("</g>")

    if tour is not None and spec.show_flags and spec.flag_count > 0:
        out.append('<g id="flags" fill="none" stroke="red" stroke-width="2">')
        for f in detour_flags(tour, spec.flag_count):
            p = pts[f.middle]
            out.append(
                f'<circle class="flag" data-city="{f.middle}" data-ratio="{f.ratio:.4f}" '
                f'cx="{_f(sx(p))}" cy="{_f(sy(p))}" r="{_f(spec.point_radius * 4)}"/>'
            )
        out.append("</g>")

    out.append('<g id="cities" fill="black">')
    for i, p in enumerate(pts):
        out.append(
            f'<circle class="city" data-city="{i}" cx="{_f(sx(p))}" cy="{_f(sy(p))}" '
            f'r="{_f(spec.point_radius)}"/>'
        )
    out.append("</g>")

    if spec.show_labels:
        out.append('<g id="labels" font-family="sans-serif" font-size="10" fill="#333">')
        for i, p in enumerate(pts):
            out.append(f'<text x="{_f(sx(p) + 4)}" y="{_f(sy(p) - 4)}">{i + 1}</text>')
        out.append("</g>")

    out.append("</svg>")
    return "\n".join(out) + "\n"
