"""Planar geometry: hulls, convex layers, segment crossings, polygon area.

Orientation is exact when every coordinate is integral (the common case for
TSPLIB display data); otherwise collinearity is decided with a relative
tolerance of ``COLLINEAR_RTOL``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple, Sequence

COLLINEAR_RTOL = 1e-9


class GeometryError(ValueError):
    pass


class EmptyInputError(GeometryError):
    pass


class DuplicatePointError(GeometryError):
    pass


@dataclass(frozen=True, slots=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite point ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y


class Orientation(Enum):
    CLOCKWISE = -1
    COLLINEAR = 0
    COUNTERCLOCKWISE = 1


class LayerKind(Enum):
    POLYGON = "polygon"
    SEGMENT = "segment"
    SINGLETON = "singleton"


@dataclass(frozen=True)
class Layer:
    """One convex ring. ``vertex_ids`` index into the original point list.

    Polygon layers run counterclockwise from the lexicographically smallest
    point. Segment layers (all points collinear) are sorted lexicographically,
    so read as a cycle they walk out along the segment and straight back.
    """

    vertex_ids: tuple[int, ...]
    kind: LayerKind

    def __len__(self):
        return len(self.vertex_ids)


@dataclass(frozen=True)
class LayerDecomposition:
    layers: tuple[Layer, ...]

    def __len__(self):
        return len(self.layers)

    def __iter__(self):
        return iter(self.layers)

    def __getitem__(self, k):
        return self.layers[k]

    def sizes(self) -> list[int]:
        return [len(layer) for layer in self.layers]


class PolygonArea(NamedTuple):
    signed: float
    absolute: float


def as_points(points: Iterable) -> list[Point]:
    """Coerce an iterable of pairs (or an ``(n, 2)`` array) to Points."""
    return [p if isinstance(p, Point) else Point(float(p[0]), float(p[1])) for p in points]


def _exact(p: Point) -> bool:
    return float(p.x).is_integer() and float(p.y).is_integer()


def cross(p, q, r) -> float:
    """(q - p) x (r - p); exact integer arithmetic for integral inputs."""
    if _exact(p) and _exact(q) and _exact(r):
        px, py, qx, qy, rx, ry = (int(v) for v in (p.x, p.y, q.x, q.y, r.x, r.y))
        return (qx - px) * (ry - py) - (qy - py) * (rx - px)
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


def orientation(p, q, r) -> Orientation:
    p, q, r = as_points((p, q, r))
    c = cross(p, q, r)
    if isinstance(c, int):
        return Orientation((c > 0) - (c < 0))
    a = (q.x - p.x) * (r.y - p.y)
    b = (q.y - p.y) * (r.x - p.x)
    if abs(c) <= COLLINEAR_RTOL * max(abs(a), abs(b)):
        return Orientation.COLLINEAR
    return Orientation.COUNTERCLOCKWISE if c > 0 else Orientation.CLOCKWISE


def _turn(p, q, r) -> int:
    return orientation(p, q, r).value


def _check_input(pts: Sequence[Point]) -> None:
    if not pts:
        raise EmptyInputError("convex hull of an empty point set")
    seen = {}
    for i, p in enumerate(pts):
        key = (p.x, p.y)
        if key in seen:
            raise DuplicatePointError(f"points {seen[key]} and {i} coincide at {key}")
        seen[key] = i


def _on_segment(a: Point, b: Point, p: Point) -> bool:
    """p collinear with a-b and within its bounding box (closed)."""
    return (
        _turn(a, b, p) == 0
        and min(a.x, b.x) <= p.x <= max(a.x, b.x)
        and min(a.y, b.y) <= p.y <= max(a.y, b.y)
    )


def _hull_ids(pts: Sequence[Point], ids: Sequence[int]) -> Layer:
    order = sorted(ids, key=lambda i: (pts[i].x, pts[i].y))
    if len(order) <= 2:
        kind = LayerKind.SINGLETON if len(order) == 1 else LayerKind.SEGMENT
        return Layer(tuple(order), kind)

    # strict monotone chain: extreme vertices only
    def chain(seq):
        out: list[int] = []
        for i in seq:
            while len(out) >= 2 and _turn(pts[out[-2]], pts[out[-1]], pts[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = chain(order)
    upper = chain(reversed(order))
    extreme = lower[:-1] + upper[:-1]
    if len(extreme) < 3:
        return Layer(tuple(order), LayerKind.SEGMENT)

    # reinsert points lying on hull edges, ordered along each edge
    ring: list[int] = []
    for k, a in enumerate(extreme):
        b = extreme[(k + 1) % len(extreme)]
        pa, pb = pts[a], pts[b]
        between = [i for i in ids if i != a and i != b and _on_segment(pa, pb, pts[i])]
        between.sort(key=lambda i: (pts[i].x - pa.x) ** 2 + (pts[i].y - pa.y) ** 2)
        ring.append(a)
        ring.extend(between)
    return Layer(tuple(ring), LayerKind.POLYGON)


def convex_hull(points) -> Layer:
    """Hull of ``points`` including points interior to hull edges.

    Raises ``EmptyInputError`` or ``DuplicatePointError``.
    """
    pts = as_points(points)
    _check_input(pts)
    return _hull_ids(pts, range(len(pts)))


def convex_layers(points) -> LayerDecomposition:
    """Onion peeling: repeatedly strip the hull until nothing is left."""
    pts = as_points(points)
    _check_input(pts)
    remaining = list(range(len(pts)))
    layers = []
    while remaining:
        layer = _hull_ids(pts, remaining)
        layers.append(layer)
        taken = set(layer.vertex_ids)
        remaining = [i for i in remaining if i not in taken]
    return LayerDecomposition(tuple(layers))


def segments_properly_intersect(a1, a2, b1, b2) -> bool:
    """True iff the open segments a1-a2 and b1-b2 cross at one interior point."""
    a1, a2, b1, b2 = as_points((a1, a2, b1, b2))
    d1 = _turn(a1, a2, b1)
    d2 = _turn(a1, a2, b2)
    d3 = _turn(b1, b2, a1)
    d4 = _turn(b1, b2, a2)
    return d1 * d2 < 0 and d3 * d4 < 0


def polygon_signed_area(cycle) -> PolygonArea:
    """Shoelace area; positive for counterclockwise cycles."""
    pts = as_points(cycle)
    if len(pts) < 3:
        raise GeometryError("polygon area needs at least 3 points")
    s = 0.0
    for k, p in enumerate(pts):
        q = pts[(k + 1) % len(pts)]
        s += p.x * q.y - q.x * p.y
    s /= 2.0
    return PolygonArea(s, abs(s))


def point_in_convex(ring: Sequence[Point], p: Point) -> bool:
    """Inside-or-on test against a counterclockwise convex ring (any kind)."""
    if len(ring) == 1:
        return (p.x, p.y) == (ring[0].x, ring[0].y)
    if len(ring) == 2 or all(_turn(ring[0], ring[1], r) == 0 for r in ring[2:]):
        lo = min(ring, key=lambda r: (r.x, r.y))
        hi = max(ring, key=lambda r: (r.x, r.y))
        return _on_segment(lo, hi, p)
    return all(_turn(ring[k], ring[(k + 1) % len(ring)], p) >= 0 for k in range(len(ring)))
