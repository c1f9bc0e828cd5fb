"""Tours: evaluation, triangle-inequality detour flags, crossings, local search."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .geometry import as_points, polygon_signed_area, segments_properly_intersect
from .instance import InstanceError, InvalidTourError, NoGeometryError, TspInstance

# strict-improvement threshold for local search; keeps float ties from cycling
IMPROVE_EPS = 1e-9

DEFAULT_TOP_K = 5
DEFAULT_RADIUS = 5


def canonical_order(order: Sequence[int]) -> tuple[int, ...]:
    """Rotate to start at the smallest city; pick the direction whose second
    element is smaller."""
    order = list(order)
    if len(order) < 3:
        return tuple(sorted(order))
    k = order.index(min(order))
    fwd = order[k:] + order[:k]
    bwd = [fwd[0]] + fwd[:0:-1]
    return tuple(fwd if fwd[1] < bwd[1] else bwd)


@dataclass(frozen=True, eq=False)
class Tour:
    order: tuple[int, ...]
    instance: TspInstance = field(repr=False)

    def __init__(self, order: Iterable[int], instance: TspInstance):
        order = [int(c) for c in order]
        n = instance.n
        if sorted(order) != list(range(n)):
            raise InvalidTourError(f"order is not a permutation of 0..{n - 1}")
        object.__setattr__(self, "order", canonical_order(order))
        object.__setattr__(self, "instance", instance)

    def __len__(self):
        return len(self.order)

    def __eq__(self, other):
        if not isinstance(other, Tour):
            return NotImplemented
        return self.instance is other.instance and self.order == other.order

    def __hash__(self):
        return hash((id(self.instance), self.order))

    @property
    def length(self) -> float:
        return tour_length(self)

    def edges(self) -> list[tuple[int, int]]:
        o = self.order
        return [(o[i], o[(i + 1) % len(o)]) for i in range(len(o))]

    def to_json(self) -> str:
        return json.dumps(
            {"name": self.instance.name, "order": list(self.order), "length": self.length}
        )

    def to_tsplib(self, name: str | None = None) -> str:
        name = name or f"{self.instance.name}.tour"
        lines = [
            f"NAME : {name}",
            f"COMMENT : length {_fmt_len(self.length)}",
            "TYPE : TOUR",
            f"DIMENSION : {len(self.order)}",
            "TOUR_SECTION",
        ]
        lines += [str(c + 1) for c in self.order]
        lines += ["-1", "EOF"]
        return "\n".join(lines) + "\n"


def _fmt_len(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else f"{x:.6f}"


def tour_from_json(text: str, inst: TspInstance) -> Tour:
    data = json.loads(text)
    return Tour(data["order"], inst)


def cycle_length(order: Sequence[int], d) -> float:
    """Closed-cycle length of ``order`` under the table ``d``."""
    m = len(order)
    if m < 2:
        return 0.0
    return float(sum(d[order[i], order[(i + 1) % m]] for i in range(m)))


def tour_length(t: Tour) -> float:
    return cycle_length(t.order, t.instance.dist)


# --------------------------------------------------------------------------
# Triangle-inequality flags
# --------------------------------------------------------------------------


class DetourFlag(NamedTuple):
    middle: int
    prev: int
    next: int
    ratio: float


def _detour_list(order: Sequence[int], d) -> list[DetourFlag]:
    m = len(order)
    out = []
    for i in range(m):
        a, b, c = order[i - 1], order[i], order[(i + 1) % m]
        direct = d[a, c]
        ratio = 1.0 if direct == 0 else float((d[a, b] + d[b, c]) / direct)
        out.append(DetourFlag(b, a, c, ratio))
    out.sort(key=lambda f: (-f.ratio, f.middle))
    return out


def detour_flags(t: Tour, top_k: int | None = DEFAULT_TOP_K) -> list[DetourFlag]:
    """Per-city detour ratios (d(A,B) + d(B,C)) / d(A,C), largest first.

    Ties sort by the middle city's index. ``top_k=None`` returns all of them.
    """
    if len(t) < 3:
        return []
    flags = _detour_list(t.order, t.instance.dist)
    return flags if top_k is None else flags[:top_k]


# --------------------------------------------------------------------------
# Crossings and area
# --------------------------------------------------------------------------


def _require_geometry(inst: TspInstance):
    if not inst.has_geometry:
        raise NoGeometryError(f"instance {inst.name!r} has no coordinates")
    return as_points(inst.geometry)


def find_crossings(t: Tour) -> list[tuple[int, int]]:
    """Pairs (i, j), i < j, of non-adjacent tour edges that properly cross.

    Edge ``i`` joins tour positions ``i`` and ``i + 1``.
    """
    pts = _require_geometry(t.instance)
    o = t.order
    m = len(o)
    out = []
    for i in range(m):
        a1, a2 = pts[o[i]], pts[o[(i + 1) % m]]
        for j in range(i + 2, m):
            if i == 0 and j == m - 1:
                continue
            if segments_properly_intersect(a1, a2, pts[o[j]], pts[o[(j + 1) % m]]):
                out.append((i, j))
    return out


class TourArea(NamedTuple):
    signed: float
    absolute: float
    crossings: int


def tour_area(t: Tour) -> TourArea:
    """Shoelace area of the tour polygon, with its crossing count.

    The magnitude only means "enclosed area" when ``crossings == 0``.
    """
    pts = _require_geometry(t.instance)
    if len(t) < 3:
        return TourArea(0.0, 0.0, 0)
    area = polygon_signed_area([pts[c] for c in t.order])
    return TourArea(area.signed, area.absolute, len(find_crossings(t)))


# --------------------------------------------------------------------------
# Local search
# --------------------------------------------------------------------------


def _two_opt_pass(order: list[int], d, allowed: set[int] | None) -> bool:
    """One first-improvement 2-opt move in place; True if a move was made."""
    m = len(order)
    for i in range(m - 1):
        a, b = order[i], order[i + 1]
        dab = d[a, b]
        for j in range(i + 2, m):
            if i == 0 and j == m - 1:
                continue
            if allowed is not None and i not in allowed and j not in allowed:
                continue
            c, e = order[j], order[(j + 1) % m]
            delta = d[a, c] + d[b, e] - dab - d[c, e]
            if delta < -IMPROVE_EPS:
                order[i + 1 : j + 1] = order[i + 1 : j + 1][::-1]
                return True
    return False


def _flag_window(order: Sequence[int], d, top_k: int, radius: int) -> set[int]:
    m = len(order)
    pos = {c: k for k, c in enumerate(order)}
    window: set[int] = set()
    for f in _detour_list(order, d)[:top_k]:
        p = pos[f.middle]
        window.update((p + r) % m for r in range(-radius, radius + 1))
    return window


def two_opt_improve(
    t: Tour,
    mode: str = "full",
    top_k: int = DEFAULT_TOP_K,
    radius: int = DEFAULT_RADIUS,
) -> Tour:
    """First-improvement 2-opt, repeated to a local optimum.

    ``mode="flagged"`` only tries moves where at least one removed edge starts
    within ``radius`` tour positions of one of the ``top_k`` highest
    detour-ratio cities; the flags are recomputed after every move.
    """
    if mode not in ("full", "flagged"):
        raise ValueError(f"unknown 2-opt mode {mode!r}")
    d = t.instance.dist
    order = list(t.order)
    if len(order) < 4:
        return t
    while True:
        allowed = _flag_window(order, d, top_k, radius) if mode == "flagged" else None
        if not _two_opt_pass(order, d, allowed):
            break
    out = Tour(order, t.instance)
    assert out.length <= t.length + IMPROVE_EPS
    return out


def _or_opt_pass(order: list[int], d, seg_len: int) -> bool:
    m = len(order)
    if m < seg_len + 3:
        return False
    for i in range(m):
        seg = [order[(i + k) % m] for k in range(seg_len)]
        p, q = order[i - 1], order[(i + seg_len) % m]
        s0, s1 = seg[0], seg[-1]
        gain = d[p, s0] + d[s1, q] - d[p, q]
        if gain <= IMPROVE_EPS:
            continue
        rest = [order[(i + seg_len + k) % m] for k in range(m - seg_len)]
        # rest starts at q and ends at p; edge (p, q) closes it
        for k in range(len(rest)):
            a, b = rest[k], rest[(k + 1) % len(rest)]
            if a == p and b == q:
                continue
            base = d[a, b]
            fwd = d[a, s0] + d[s1, b] - base
            rev = d[a, s1] + d[s0, b] - base
            if fwd < gain - IMPROVE_EPS or rev < gain - IMPROVE_EPS:
                piece = seg if fwd <= rev else seg[::-1]
                order[:] = rest[: k + 1] + piece + rest[k + 1 :]
                return True
    return False


def or_opt_improve(t: Tour, segment_lengths: Iterable[int] = (1, 2, 3)) -> Tour:
    """Relocate segments of 1-3 consecutive cities (optionally reversed) while
    that shortens the tour."""
    lengths = sorted(set(segment_lengths))
    if any(s not in (1, 2, 3) for s in lengths):
        raise ValueError("segment lengths must come from {1, 2, 3}")
    d = t.instance.dist
    order = list(t.order)
    if not lengths:
        return t
    improved = True
    while improved:
        improved = any(_or_opt_pass(order, d, s) for s in lengths)
    out = Tour(order, t.instance)
    assert out.length <= t.length + IMPROVE_EPS
    return out


@dataclass(frozen=True)
class ImproveResult:
    tour: Tour
    lengths: tuple[float, ...]
    flags_used: tuple[DetourFlag, ...]


def improve_tour(t: Tour, top_k: int = DEFAULT_TOP_K, radius: int = DEFAULT_RADIUS) -> ImproveResult:
    """Detour flags -> flagged 2-opt -> Or-opt, repeated until a round stalls.

    ``lengths`` records the tour length after every stage of every round,
    starting with the input.
    """
    lengths = [t.length]
    used: list[DetourFlag] = []
    cur = t
    while True:
        used.extend(detour_flags(cur, top_k))
        nxt = two_opt_improve(cur, "flagged", top_k, radius)
        lengths.append(nxt.length)
        nxt = or_opt_improve(nxt)
        lengths.append(nxt.length)
        if nxt.length >= cur.length - IMPROVE_EPS:
            cur = nxt if nxt.length <= cur.length else cur
            break
        cur = nxt
    return ImproveResult(cur, tuple(lengths), tuple(used))
