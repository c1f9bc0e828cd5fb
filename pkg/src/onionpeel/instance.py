"""TSP instances, distance metrics, and a TSPLIB subset reader/writer."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .geometry import Point


class MetricKind(Enum):
    EUC_2D = "EUC_2D"
    ATT = "ATT"
    EXPLICIT = "EXPLICIT"
    RAW_EUC = "RAW_EUC"


class InstanceError(ValueError):
    pass


class NoGeometryError(InstanceError):
    """Raised when an operation needs coordinates the instance does not carry."""


class TsplibError(InstanceError):
    """Base for TSPLIB parse failures; ``line`` is 1-based (0 = end of file)."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class DimensionMismatchError(TsplibError):
    pass


class UnknownMetricError(TsplibError):
    pass


class MissingSectionError(TsplibError):
    pass


class NonNumericTokenError(TsplibError):
    pass


class InvalidTourError(InstanceError):
    pass


def _nint(x: float) -> int:
    return int(x + 0.5)


def _coord_matrix(xy: np.ndarray, metric: MetricKind) -> np.ndarray:
    diff = xy[:, None, :] - xy[None, :, :]
    sq = (diff**2).sum(axis=-1)
    if metric is MetricKind.RAW_EUC:
        return np.sqrt(sq)
    if metric is MetricKind.EUC_2D:
        return np.floor(np.sqrt(sq) + 0.5)
    if metric is MetricKind.ATT:
        r = np.sqrt(sq / 10.0)
        t = np.floor(r + 0.5)
        return np.where(t < r, t + 1, t)
    raise InstanceError(f"{metric} is not a coordinate metric")


@dataclass(eq=False)
class TspInstance:
    """A symmetric TSP instance.

    ``coords`` feed the metric for coordinate kinds; ``display_coords`` are
    only used for geometry (layers, crossings, area, drawing). Treat
    instances as immutable once built.
    """

    name: str
    n: int
    metric: MetricKind
    coords: Optional[np.ndarray] = None
    display_coords: Optional[np.ndarray] = None
    matrix: Optional[np.ndarray] = None
    comment: str = ""

    def __post_init__(self):
        for attr in ("coords", "display_coords", "matrix"):
            v = getattr(self, attr)
            if v is not None:
                v = np.array(v, dtype=float)
                v.setflags(write=False)
                setattr(self, attr, v)
        if self.metric is MetricKind.EXPLICIT:
            if self.matrix is None:
                raise InstanceError("EXPLICIT metric requires a distance matrix")
            m = self.matrix
            if m.shape != (self.n, self.n):
                raise InstanceError(f"matrix shape {m.shape} != ({self.n}, {self.n})")
            if not np.array_equal(m, m.T):
                raise InstanceError("distance matrix is not symmetric")
            if np.any(np.diag(m) != 0) or np.any(m < 0):
                raise InstanceError("distance matrix needs zero diagonal and nonnegative entries")
        else:
            if self.coords is None:
                raise InstanceError(f"{self.metric.value} metric requires coordinates")
            if self.coords.shape != (self.n, 2):
                raise InstanceError(f"coords shape {self.coords.shape} != ({self.n}, 2)")
        if self.display_coords is not None and self.display_coords.shape != (self.n, 2):
            raise InstanceError("display_coords must have one row per city")
        for arr in (self.coords, self.display_coords):
            if arr is not None and not np.all(np.isfinite(arr)):
                raise InstanceError("coordinates must be finite")

    @cached_property
    def dist(self) -> np.ndarray:
        """Full ``n x n`` distance table (read-only)."""
        if self.metric is MetricKind.EXPLICIT:
            return self.matrix
        d = _coord_matrix(self.coords, self.metric) if self.n else np.zeros((0, 0))
        d.setflags(write=False)
        return d

    @property
    def geometry(self) -> np.ndarray:
        """Coordinates used for geometry; display data wins over metric coords."""
        if self.display_coords is not None:
            return self.display_coords
        if self.coords is not None:
            return self.coords
        raise NoGeometryError(f"instance {self.name!r} has no coordinates")

    @property
    def has_geometry(self) -> bool:
        return self.display_coords is not None or self.coords is not None

    def points(self) -> list[Point]:
        return [Point(float(x), float(y)) for x, y in self.geometry]

    def distance(self, i: int, j: int) -> float:
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"city index out of range for n={self.n}: ({i}, {j})")
        return float(self.dist[i, j])

    def triangle_violations(self, limit: int | None = None) -> list[tuple[int, int, int]]:
        """Triples (i, j, k) with d(i,j) + d(j,k) < d(i,k); reported, never rejected."""
        d = self.dist
        out = []
        for j in range(self.n):
            via = d[:, j][:, None] + d[j, :][None, :]
            bad = np.argwhere(via < d - 1e-9)
            for i, k in bad:
                if i < k:
                    out.append((int(i), j, int(k)))
                    if limit is not None and len(out) >= limit:
                        return out
        return out


# --------------------------------------------------------------------------
# TSPLIB
# --------------------------------------------------------------------------

_SECTIONS = {
    "NODE_COORD_SECTION",
    "DISPLAY_DATA_SECTION",
    "EDGE_WEIGHT_SECTION",
    "TOUR_SECTION",
}
_FORMATS = {"FULL_MATRIX", "LOWER_DIAG_ROW", "UPPER_ROW"}


def _tokens(text: str):
    """Yield (line_no, token) pairs."""
    for no, line in enumerate(text.splitlines(), start=1):
        for tok in line.split():
            yield no, tok


def _split_header(text: str):
    """Return (specs dict, sections dict mapping name -> list of (line, token))."""
    specs: dict[str, tuple[str, int]] = {}
    sections: dict[str, list[tuple[int, str]]] = {}
    current = None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        head = line.split(":", 1)[0].strip().upper()
        if head in _SECTIONS:
            current = sections.setdefault(head, [])
            continue
        if head == "EOF":
            current = None
            continue
        if current is not None and ":" not in line:
            current.extend((no, t) for t in line.split())
            continue
        if ":" in line:
            key, value = line.split(":", 1)
            specs[key.strip().upper()] = (value.strip(), no)
            current = None
            continue
        raise TsplibError(f"unexpected content {line!r}", no)
    return specs, sections


def _num(tok: tuple[int, str]) -> float:
    no, t = tok
    try:
        return float(t)
    except ValueError:
        raise NonNumericTokenError(f"non-numeric token {t!r}", no) from None


def _read_coords(entries, n: int, section: str) -> np.ndarray:
    if len(entries) % 3 != 0 or len(entries) // 3 != n:
        line = entries[-1][0] if entries else 0
        raise DimensionMismatchError(
            f"{section} holds {len(entries) / 3:g} records, DIMENSION is {n}", line
        )
    xy = np.zeros((n, 2))
    seen = set()
    for k in range(n):
        idx_tok = entries[3 * k]
        idx = _num(idx_tok)
        if idx != int(idx) or not 1 <= idx <= n or idx in seen:
            raise TsplibError(f"bad node id {idx_tok[1]!r}", idx_tok[0])
        seen.add(idx)
        xy[int(idx) - 1] = (_num(entries[3 * k + 1]), _num(entries[3 * k + 2]))
    return xy


def _read_matrix(entries, n: int, fmt: str, fmt_line: int) -> np.ndarray:
    if fmt == "FULL_MATRIX":
        need = n * n
    elif fmt == "LOWER_DIAG_ROW":
        need = n * (n + 1) // 2
    elif fmt == "UPPER_ROW":
        need = n * (n - 1) // 2
    else:
        raise UnknownMetricError(f"unsupported EDGE_WEIGHT_FORMAT {fmt!r}", fmt_line)
    if len(entries) != need:
        line = entries[-1][0] if entries else 0
        raise DimensionMismatchError(
            f"EDGE_WEIGHT_SECTION has {len(entries)} values, {fmt} with DIMENSION {n} needs {need}",
            line,
        )
    vals = [_num(t) for t in entries]
    m = np.zeros((n, n))
    if fmt == "FULL_MATRIX":
        m[:] = np.array(vals).reshape(n, n)
        if not np.array_equal(m, m.T):
            raise TsplibError("FULL_MATRIX is not symmetric", entries[-1][0])
    elif fmt == "LOWER_DIAG_ROW":
        k = 0
        for i in range(n):
            for j in range(i + 1):
                m[i, j] = m[j, i] = vals[k]
                k += 1
    else:
        k = 0
        for i in range(n):
            for j in range(i + 1, n):
                m[i, j] = m[j, i] = vals[k]
                k += 1
    return m


def parse_tsplib(text: str) -> TspInstance:
    """Parse the supported TSPLIB subset (EUC_2D, ATT, EXPLICIT)."""
    specs, sections = _split_header(text)
    name = specs.get("NAME", ("unnamed", 0))[0]
    typ, typ_line = specs.get("TYPE", ("TSP", 0))
    if typ.upper() != "TSP":
        raise TsplibError(f"unsupported TYPE {typ!r}", typ_line)
    if "DIMENSION" not in specs:
        raise MissingSectionError("missing DIMENSION")
    dim_str, dim_line = specs["DIMENSION"]
    n = _num((dim_line, dim_str))
    if n != int(n) or n < 0:
        raise TsplibError(f"bad DIMENSION {dim_str!r}", dim_line)
    n = int(n)
    if "EDGE_WEIGHT_TYPE" not in specs:
        raise MissingSectionError("missing EDGE_WEIGHT_TYPE")
    ewt, ewt_line = specs["EDGE_WEIGHT_TYPE"]
    try:
        metric = MetricKind(ewt.upper())
    except ValueError:
        raise UnknownMetricError(f"unknown EDGE_WEIGHT_TYPE {ewt!r}", ewt_line) from None
    if metric is MetricKind.RAW_EUC:
        raise UnknownMetricError("RAW_EUC is not a TSPLIB edge weight type", ewt_line)

    coords = display = matrix = None
    if metric is MetricKind.EXPLICIT:
        if "EDGE_WEIGHT_SECTION" not in sections:
            raise MissingSectionError("EXPLICIT instance without EDGE_WEIGHT_SECTION")
        fmt, fmt_line = specs.get("EDGE_WEIGHT_FORMAT", ("", 0))
        if not fmt:
            raise MissingSectionError("EXPLICIT instance without EDGE_WEIGHT_FORMAT")
        matrix = _read_matrix(sections["EDGE_WEIGHT_SECTION"], n, fmt.upper(), fmt_line)
    else:
        if "NODE_COORD_SECTION" not in sections:
            raise MissingSectionError(f"{metric.value} instance without NODE_COORD_SECTION")
        coords = _read_coords(sections["NODE_COORD_SECTION"], n, "NODE_COORD_SECTION")
    if "DISPLAY_DATA_SECTION" in sections:
        display = _read_coords(sections["DISPLAY_DATA_SECTION"], n, "DISPLAY_DATA_SECTION")

    return TspInstance(
        name=name,
        n=n,
        metric=metric,
        coords=coords,
        display_coords=display,
        matrix=matrix,
        comment=specs.get("COMMENT", ("", 0))[0],
    )


def read_tsplib(path) -> TspInstance:
    return parse_tsplib(Path(path).read_text(encoding="utf-8"))


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def format_tsplib(inst: TspInstance) -> str:
    """Serialize to TSPLIB text. RAW_EUC has no TSPLIB name, so it is written
    as an EXPLICIT full matrix plus display data."""
    lines = [f"NAME : {inst.name}", "TYPE : TSP"]
    if inst.comment:
        lines.append(f"COMMENT : {inst.comment}")
    lines.append(f"DIMENSION : {inst.n}")
    explicit = inst.metric in (MetricKind.EXPLICIT, MetricKind.RAW_EUC)
    display = inst.display_coords
    if inst.metric is MetricKind.RAW_EUC and display is None:
        display = inst.coords
    if explicit:
        lines += ["EDGE_WEIGHT_TYPE : EXPLICIT", "EDGE_WEIGHT_FORMAT : FULL_MATRIX"]
        if display is not None:
            lines.append("DISPLAY_DATA_TYPE : TWOD_DISPLAY")
        lines.append("EDGE_WEIGHT_SECTION")
        for row in inst.dist:
            lines.append(" ".join(_fmt(v) for v in row))
    else:
        lines.append(f"EDGE_WEIGHT_TYPE : {inst.metric.value}")
        if display is not None:
            lines.append("DISPLAY_DATA_TYPE : TWOD_DISPLAY")
        lines.append("NODE_COORD_SECTION")
        for i, (x, y) in enumerate(inst.coords, start=1):
            lines.append(f"{i} {_fmt(x)} {_fmt(y)}")
    if display is not None:
        lines.append("DISPLAY_DATA_SECTION")
        for i, (x, y) in enumerate(display, start=1):
            lines.append(f"{i} {_fmt(x)} {_fmt(y)}")
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def parse_tour_order(text: str, n: int) -> list[int]:
    """0-based city order from a TSPLIB TOUR file, validated against ``n``."""
    specs, sections = _split_header(text)
    if "TOUR_SECTION" not in sections:
        raise MissingSectionError("missing TOUR_SECTION")
    if "DIMENSION" in specs:
        dim_str, dim_line = specs["DIMENSION"]
        if int(_num((dim_line, dim_str))) != n:
            raise DimensionMismatchError(f"tour DIMENSION {dim_str} != instance size {n}", dim_line)
    order: list[int] = []
    seen: dict[int, int] = {}
    for tok in sections["TOUR_SECTION"]:
        v = _num(tok)
        if v == -1:
            break
        if v != int(v) or not 1 <= v <= n:
            raise InvalidTourError(f"line {tok[0]}: city {tok[1]} out of range 1..{n}")
        c = int(v) - 1
        if c in seen:
            raise InvalidTourError(f"line {tok[0]}: city {c + 1} repeated (first on line {seen[c]})")
        seen[c] = tok[0]
        order.append(c)
    if len(order) != n:
        raise InvalidTourError(f"tour lists {len(order)} cities, instance has {n}")
    return order


def parse_opt_tour(text: str, inst: TspInstance):
    from .tour import Tour

    return Tour(parse_tour_order(text, inst.n), inst)


def read_opt_tour(path, inst: TspInstance):
    return parse_opt_tour(Path(path).read_text(encoding="utf-8"), inst)


# --------------------------------------------------------------------------
# Generators and bundled data
# --------------------------------------------------------------------------


def random_uniform_instance(n: int, seed: int, box: float = 1000.0) -> TspInstance:
    """``n`` distinct uniform points in ``[0, box)^2`` under RAW_EUC."""
    if n < 3:
        raise InstanceError(f"random instance needs n >= 3, got {n}")
    rng = np.random.default_rng(seed)
    xy = rng.uniform(0.0, box, size=(n, 2))
    while len(np.unique(xy, axis=0)) < n:
        xy = rng.uniform(0.0, box, size=(n, 2))
    return TspInstance(f"uniform-{n}-s{seed}", n, MetricKind.RAW_EUC, coords=xy)


def random_convex_instance(n: int, seed: int, radius: float = 500.0) -> TspInstance:
    """``n`` points in strictly convex position on a circle."""
    if n < 3:
        raise InstanceError(f"random instance needs n >= 3, got {n}")
    rng = np.random.default_rng(seed)
    while True:
        theta = np.sort(rng.uniform(0.0, 2 * math.pi, size=n))
        gaps = np.diff(np.concatenate([theta, theta[:1] + 2 * math.pi]))
        # keep angular gaps well clear of collinear-looking triples
        if gaps.min() > 1e-3:
            break
    perm = rng.permutation(n)
    xy = radius * np.column_stack([np.cos(theta), np.sin(theta)])[perm] + radius
    return TspInstance(f"convex-{n}-s{seed}", n, MetricKind.RAW_EUC, coords=xy)


def _data_path(name: str):
    return resources.files("onionpeel").joinpath("data", name)


def load_dantzig42() -> TspInstance:
    return parse_tsplib(_data_path("dantzig42.tsp").read_text(encoding="utf-8"))


def load_dantzig42_opt_tour(inst: TspInstance | None = None):
    inst = inst if inst is not None else load_dantzig42()
    return parse_opt_tour(_data_path("dantzig42.opt.tour").read_text(encoding="utf-8"), inst)


def dantzig42_path() -> Path:
    return Path(str(_data_path("dantzig42.tsp")))
